//! `helix-steiner`: command-line access to helical Steiner trees, the Steiner
//! Ratio Function, the exact oracle and the elastic stability analysis.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use helix_steiner::Error;

use crate::commands::RangeArg;

#[derive(Debug, Parser)]
#[command(
    name = "helix-steiner",
    version,
    about = "Helical Steiner trees and the Steiner Ratio Function"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Helix parameters; both default to the ratio-function minimiser.
#[derive(Debug, Clone, Copy, Args, serde::Serialize)]
pub struct HelixArgs {
    /// Angular step in radians, in (0, pi].
    #[arg(long)]
    pub omega: Option<f64>,
    /// Pitch factor (pitch = 2*pi*alpha).
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Helical input (and optionally Steiner) points grouped by skip-m subsequence.
    Points(PointsArgs),
    /// Evaluate the Steiner Ratio Function at one point.
    Srf(SrfArgs),
    /// Locate the ratio-function minimum numerically.
    Minimize(MinimizeArgs),
    /// Tabulate a quantity over an (omega, alpha) grid.
    Scan(ScanArgs),
    /// Exact Steiner minimal tree vs. minimum spanning tree.
    Oracle(OracleArgs),
    /// Equilibrium and stationarity diagnostics of a helical p-chain.
    Stability(StabilityArgs),
    /// Optimised chain lengths for several p.
    CompareP(CompareArgs),
}

#[derive(Debug, Args, serde::Serialize)]
pub struct PointsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub helix: HelixArgs,
    /// Also emit the Steiner points of the skip-m construction.
    #[arg(long)]
    pub include_steiner: bool,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SrfArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub helix: HelixArgs,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct MinimizeArgs {
    #[arg(long)]
    #[serde(skip)]
    pub omega_lo: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub omega_hi: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub alpha_lo: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub alpha_hi: Option<f64>,
    #[arg(long, default_value_t = 12)]
    pub m_max: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coarse grid points per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct ScanArgs {
    /// srf | rho_m | cos_theta_m | per_point_lengths
    #[arg(long)]
    pub quantity: String,
    /// Comma-separated skip moduli.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub m: Vec<usize>,
    /// `lo:hi:steps` (inclusive) or a single value.
    #[arg(long)]
    pub omega: RangeArg,
    /// `lo:hi:steps` (inclusive) or a single value.
    #[arg(long)]
    pub alpha: RangeArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct OracleArgs {
    /// CSV with x,y,z columns (e.g. from `points`); only kind=P rows are used when a kind column exists.
    #[arg(long, conflicts_with = "n")]
    pub points_file: Option<PathBuf>,
    /// Use the first n helical input points.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub helix: HelixArgs,
    #[arg(long, default_value_t = 8)]
    pub n_cap: usize,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct StabilityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub helix: HelixArgs,
    /// Steiner-helix radius; defaults to the p = 3 equilibrium radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Sum T_jkp over all terminals instead of the adjacent ones.
    #[arg(long)]
    pub full_sum: bool,
    /// Also relax the chain to force equilibrium and report it.
    #[arg(long)]
    pub relax: bool,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub helix: HelixArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "invalid_flags",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::Domain(_) | Error::Singular(_) => (3, "domain"),
            Error::Infeasible { .. } => (4, "infeasible"),
            Error::Range(_) | Error::Invalid(_) | Error::CapExceeded { .. } => (2, "invalid_flags"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn fail(f: &Failure) -> ExitCode {
    let msg = f.message.replace('\n', " ");
    eprintln!("error[{}:{}]: {}", f.code, f.kind, msg.trim());
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            return fail(&Failure::invalid(line.trim_start_matches("error: ")));
        }
    };
    let result = match &cli.command {
        Command::Points(a) => commands::points(a),
        Command::Srf(a) => commands::srf(a),
        Command::Minimize(a) => commands::minimize(a),
        Command::Scan(a) => commands::scan(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Stability(a) => commands::stability(a),
        Command::CompareP(a) => commands::compare_p(a),
    };
    let text = match result {
        Ok(text) => text,
        Err(f) => return fail(&f),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&Failure {
            code: 1,
            kind: "io",
            message: e.to_string(),
        }),
    }
}
