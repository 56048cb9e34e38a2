use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod failure;
mod header;

use failure::Failure;

/// Lasso-family fits, α-modification and cross-validated selection.
#[derive(Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one penalized model at a single λ.
    Fit(FitArgs),
    /// Fit a warm-started path over the default λ grid.
    Path(PathArgs),
    /// K-fold cross-validation and selection.
    Cv(CvArgs),
    /// Monte Carlo experiment from a config file.
    Simulate(SimulateArgs),
    /// Randomized checks of the α-modification and solver properties.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Comma-delimited numeric table, optionally with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Response column name (default: last column).
    #[arg(long)]
    response: Option<String>,
}

#[derive(Args)]
struct PenaltyArgs {
    #[arg(long, value_enum, default_value_t = PenaltyKind::Lasso)]
    penalty: PenaltyKind,
    /// Concavity parameter for SCAD (default 3.7) and MCP (default 3).
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp header line.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PenaltyKind {
    Lasso,
    Relaxed,
    Scad,
    Mcp,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    penalty: PenaltyArgs,
    /// Penalty level on the standardized scale.
    #[arg(long, required_unless_present = "lambda_frac", conflicts_with = "lambda_frac")]
    lambda: Option<f64>,
    /// Penalty level as a fraction of λ_max.
    #[arg(long)]
    lambda_frac: Option<f64>,
    /// Relaxation factor for the relaxed Lasso.
    #[arg(long)]
    phi: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PathArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    penalty: PenaltyArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CvArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    penalty: PenaltyArgs,
    /// Validation error measure.
    #[arg(long)]
    metric: alphalasso::select::Metric,
    /// Selection rule.
    #[arg(long)]
    rule: alphalasso::select::Rule,
    /// Number of folds.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Seed for the fold assignment.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of φ values for the relaxed Lasso.
    #[arg(long, default_value_t = 100)]
    phi_count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment config: `key = value` lines under section headers.
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of replications.
    #[arg(long)]
    reps: Option<usize>,
    /// Write per-replication detail as JSON.
    #[arg(long)]
    detail: Option<PathBuf>,
    /// Allow experiments above the size limit.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Property to check (repeatable; default: all).
    #[arg(long)]
    property: Vec<alphalasso::verify::Property>,
    /// Instances per property.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = alphalasso::verify::VerifyOptions::default().seed)]
    seed: u64,
    /// Write the reports as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, hide = true, value_enum)]
    inject_fault: Option<FaultKind>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultKind {
    FlipW2,
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("ALPHALASSO_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("ALPHALASSO_THREADS: not a count: `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("ALPHALASSO_THREADS: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Fit(a) => commands::fit(a),
        Command::Path(a) => commands::path(a),
        Command::Cv(a) => commands::cv(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
