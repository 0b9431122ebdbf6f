//! Helical Steiner trees and the Steiner Ratio Function.
//!
//! * [`helix`]: helical input/Steiner point sets and skip-`m` subsequences.
//! * [`srf`]: tree lengths, the full-tree restriction and the ratio function.
//! * [`optimize`]: numeric location of the ratio minimum and grid scans.
//! * [`oracle`]: exact small-instance Steiner minimal trees.
//! * [`stability`]: p-regular chain networks under elastic edge forces.

pub mod error;
pub mod geometry;
pub mod helix;
pub mod network;
pub mod optimize;
pub mod oracle;
pub mod simplex;
pub mod srf;
pub mod stability;

pub use error::{Error, Result};
pub use geometry::Point3;
pub use helix::{HelixParams, PointKind, SubsequenceSpec};
pub use network::{TopologyTag, TreeNetwork};
pub use optimize::{MinimizationResult, ScanTable, SearchBox};
pub use oracle::{OracleResult, TopologyId};
pub use srf::{LengthBreakdown, SrfValue};
pub use stability::{EquilibriumReport, ForceAssignment, PChainSpec};
