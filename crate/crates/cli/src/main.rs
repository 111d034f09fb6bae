//! `aqrm`: coefficient tables, symbolic and numeric verification, J² fits
//! and crossing scans for the asymmetric Rabi model at integer bias.
//!
//! Exit codes: 0 success, 2 inconsistent tables, a failed check or an
//! unwritable output, 64 usage error.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Failed(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "aqrm", version, about = "Hidden-symmetry operators of the asymmetric quantum Rabi model")]
pub struct Cli {
    /// Flat TOML file with default parameter values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the coefficient tables A, B, C, D for bias N.
    Coeffs(CoeffsArgs),
    /// Check tables symbolically or check [J, H] = 0 numerically.
    Verify(VerifyArgs),
    /// Fit J² = Σ xₙHⁿ on interior eigenpairs.
    #[command(name = "fit-j2")]
    FitJ2(FitArgs),
    /// Scan the low spectrum over g and classify level crossings.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormatArg {
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportArg {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormatArg,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub margin: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, required_unless_present = "tables")]
    pub n: Option<u32>,
    /// Verify an existing JSON table file instead of building one.
    #[arg(long, value_name = "PATH")]
    pub tables: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "symbolic")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub point: PointArgs,
    /// Relative commutator tolerance (numeric mode).
    #[arg(long)]
    pub comm_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub report: ReportArg,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub point: PointArgs,
    /// Tolerance on x_N and the relative error of x_(N-1).
    #[arg(long)]
    pub fit_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub report: ReportArg,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("model").required(true).args(["n", "bias"])))]
pub struct ScanArgs {
    /// Integer bias: parity-resolved classification.
    #[arg(long)]
    pub n: Option<u32>,
    /// Any real bias: classification by gap only.
    #[arg(long, allow_negative_numbers = true)]
    pub bias: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_hi: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
    /// CSV spectrum file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out_csv: Option<PathBuf>,
    /// JSON crossing report file.
    #[arg(long, value_name = "PATH")]
    pub out_json: Option<PathBuf>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    pub sequential: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aqrm: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
