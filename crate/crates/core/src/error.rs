use thiserror::Error;

/// Errors raised by the geometric and ratio computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A formula was evaluated outside the region where it has a real value.
    #[error("domain error: {0}")]
    Domain(String),
    /// An integer argument (index, modulus, point count) is out of range.
    #[error("range error: {0}")]
    Range(String),
    /// No p-regular chain exists for this terminal count.
    #[error("infeasible network: n={n}, p={p} gives non-integral Steiner count")]
    Infeasible { n: usize, p: usize },
    /// Two points that must be distinct coincide.
    #[error("singular configuration: {0}")]
    Singular(String),
    /// The exact oracle was asked for more terminals than its cap allows.
    #[error("terminal count {n} exceeds oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
