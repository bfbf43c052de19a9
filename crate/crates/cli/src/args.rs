use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pirad_core::IntegralityMode;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "pirad",
    version,
    about = "Exact p-adic radius of convergence of exp(P) for polynomials P")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Run one job per line of FILE (`-` for stdin), concurrently.
    /// Lines look like `radius -p 3 "T"`; blank lines and `#` comments are skipped.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Exact log_p of the radius of convergence.
    Radius(PolyArgs),
    /// Valuations of the transformed polynomial and of its exponential.
    Tilde(PolyArgs),
    /// Decide whether exp(P) has integral coefficients.
    Integrality {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
    },
    /// Radius of the Taylor expansion of exp(P) at a point.
    #[command(group = clap::ArgGroup::new("point").required(true).args(["at", "generic_logr"]))]
    Roc {
        #[command(flatten)]
        poly: PolyArgs,
        /// Expansion point, in the polynomial grammar without T.
        #[arg(long, value_name = "POINT", allow_hyphen_values = true)]
        at: Option<String>,
        /// Generic point with log_p |a| equal to this rational.
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        generic_logr: Option<String>,
    },
    /// Dual Newton polygon of the transformed exponential.
    Newton(PolyArgs),
    /// Brute-force coefficients of exp(P) up to degree M.
    Oracle {
        #[command(flatten)]
        poly: PolyArgs,
        /// Degree bound; defaults to min(4 D p, 2000).
        #[arg(short = 'M', value_name = "BOUND")]
        bound: Option<usize>,
    },
    /// p-typical components and universal coordinates.
    Witt(PolyArgs),
}

impl Command {
    pub fn poly_args(&self) -> &PolyArgs {
        match self {
            Command::Radius(a) | Command::Tilde(a) | Command::Newton(a) | Command::Witt(a) => a,
            Command::Integrality { poly, .. } | Command::Roc { poly, .. } | Command::Oracle { poly, .. } => poly,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// The prime p.
    #[arg(short = 'p', value_name = "PRIME")]
    pub prime: u32,

    /// Starting working precision in digits; doubled on demand.
    #[arg(long, value_name = "DIGITS")]
    pub prec: Option<u32>,

    /// Declared degree D, at least the actual degree.
    #[arg(long, value_name = "D")]
    pub degree: Option<usize>,

    /// The polynomial, e.g. "T + T^3/3"; read from stdin when absent.
    #[arg(value_name = "POLY", allow_hyphen_values = true)]
    pub poly: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Full,
    Ppowers,
    Monoid,
}

impl From<ModeArg> for IntegralityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => IntegralityMode::Full,
            ModeArg::Ppowers => IntegralityMode::PPowers,
            ModeArg::Monoid => IntegralityMode::Monoid,
        }
    }
}
