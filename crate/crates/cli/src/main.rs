//! Command-line front end: simulate samples, estimate the drift and jump
//! mass, invert for the Lévy density, and run seeded experiments.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 invalid configuration or
//! input, 3 I/O error, 4 degenerate denominator moment.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levy_expfun::Error;

pub const SEED_ENV: &str = "LEVY_EXPFUN_SEED";

#[derive(Parser, Debug)]
#[command(name = "levy-expfun", version, about = "Lévy triplet estimation from exponential functionals")]
pub struct Cli {
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw i.i.d. samples of the exponential functional of a reference model
    Simulate(SimulateArgs),
    /// Estimate drift and jump mass from a sample file
    Estimate(EstimateArgs),
    /// Estimate the Lévy density from a sample file
    Invert(InvertArgs),
    /// Run a Monte Carlo experiment described by a JSON config
    Experiment(ExperimentArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    ExpJump,
    Geometric,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "exp-jump")]
    pub model: ModelKind,
    /// Drift (exp-jump)
    #[arg(long, default_value_t = 1.8)]
    pub c: f64,
    /// Jump mass (exp-jump)
    #[arg(long, default_value_t = 0.7)]
    pub a: f64,
    /// Jump rate (exp-jump)
    #[arg(long, default_value_t = 0.2)]
    pub b: f64,
    /// Geometric factor (geometric)
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Poisson intensity (geometric)
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Truncation point of the jump law (geometric)
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Relative truncation tolerance of the series sampler (geometric)
    #[arg(long, default_value_t = levy_expfun::models::DEFAULT_SERIES_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub n: usize,
    /// Seed; LEVY_EXPFUN_SEED is used when absent
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Real part of the evaluation points
    #[arg(long, default_value_t = 30.0)]
    pub u: f64,
    /// Frequency window V
    #[arg(long, default_value_t = 30.0, conflicts_with = "gamma")]
    pub v_max: f64,
    /// Mellin decay rate; selects V = kappa ln n instead of --v-max
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Window constant, below 1/(2 gamma) (default 1/(4 gamma))
    #[arg(long, requires = "gamma")]
    pub kappa: Option<f64>,
    /// Lower end of the one-sided weight support
    #[arg(long, alias = "w-epsilon", default_value_t = levy_expfun::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = levy_expfun::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// One weight per grid point, one per line (default: uniform)
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Sample CSV with header row
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// JSON result file (default: JSON on stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Kernel bandwidth h (default 1/V)
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub x_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub x_max: f64,
    /// Density grid x_k = x_min + k (x_max - x_min) / points, k = 1..=points
    #[arg(long, default_value_t = 200)]
    pub x_points: usize,
    /// Report the density of jumps divided by this factor
    #[arg(long, default_value_t = 1.0)]
    pub jump_scale: f64,
    /// Replace negative density values by zero
    #[arg(long)]
    pub clip: bool,
    /// CSV with columns x, nu_real, nu_imag
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// JSON experiment config
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides output_dir of the config (default: ./results)
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Overrides master_seed of the config and LEVY_EXPFUN_SEED
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidParameter(_)
            | Error::InvalidSamples(_)
            | Error::InvalidGrid(_)
            | Error::Json(_)
            | Error::PoleAtMinusB
            | Error::AccuracyRegionExceeded { .. }
            | Error::ZeroDenominator(_) => 2,
            Error::Csv(c) if c.is_io_error() => 3,
            Error::Csv(_) => 2,
            Error::Io(_) => 3,
            Error::DegenerateDenominator { .. } => 4,
            Error::Overflow { .. } | Error::TruncationCapReached { .. } | Error::NonDecayingMoments { .. } => 1,
        };
        let mut message = e.to_string();
        if let Error::DegenerateDenominator { .. } = e {
            message.push_str("; reduce --v-max or supply more samples");
        }
        Self { code, message }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Estimate(args) => commands::estimate(&args),
        Command::Invert(args) => commands::invert(&args),
        Command::Experiment(args) => commands::experiment(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
