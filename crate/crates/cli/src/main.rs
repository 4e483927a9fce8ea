//! `yahil` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! failure (a certificate, an invariant, or the computation itself).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "yahil",
    version,
    about = "Self-similar Yahil collapse profiles and their sign certificates"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Polytropic index, 1 < gamma < 4/3.
    #[arg(long, global = true, default_value_t = 1.2)]
    pub gamma: f64,
    /// Output file (a directory for `plotdata`). Standard output if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Multiplies every certificate tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// Final bisection bracket relative to the sonic window width.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_rel: f64,
    /// Relative tolerance of the ODE integrator.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_int: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Re-verify every sign certificate with interval arithmetic.
    Certify(CertifyArgs),
    /// Power-series expansion at a sonic point.
    Expand(ExpandArgs),
    /// Shoot for the critical sonic point and write the global profile.
    Solve(SolveArgs),
    /// Data for the branch and level-set figures.
    Plotdata(PlotArgs),
    /// Physical density, velocity and mass at a fixed time.
    Physical(PhysicalArgs),
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 4_000_000)]
    pub max_boxes: usize,
    /// Skip the checks that are not themselves in the listings.
    #[arg(long)]
    pub no_supplementary: bool,
    /// Test hook: reverse the claim of the named certificate.
    #[arg(long, hide = true)]
    pub corrupt: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Sonic point; must lie in the sonic window.
    #[arg(long, allow_hyphen_values = true)]
    pub y_star: f64,
    #[arg(long, default_value_t = 60)]
    pub n_max: usize,
    /// Summary file for CSV output. Defaults next to `--out`.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, default_value_t = 60)]
    pub n_max: usize,
    /// Inner end of the profile as a multiple of the critical sonic point.
    #[arg(long, default_value_t = 1e-4)]
    pub y_min_factor: f64,
    /// Outer end of the profile as a multiple of the critical sonic point.
    #[arg(long, default_value_t = 1e4)]
    pub y_max_factor: f64,
    /// Summary file for CSV output. Defaults next to `--out`.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Indices to tabulate; 1 gives the closed-form limit.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1.01, 10.0 / 9.0, 1.3])]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Args, Debug)]
pub struct PhysicalArgs {
    /// Time before collapse, negative.
    #[arg(long, allow_hyphen_values = true, default_value_t = -1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub r_max: f64,
    /// Radii, spaced evenly in `ln r`.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Profile CSV from `solve`; solved on the fly if absent.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

/// How a command failed, which fixes the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verify(String),
}

impl From<yahil::Error> for Failure {
    fn from(e: yahil::Error) -> Self {
        Failure::Verify(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(2)
        }
    }
}
