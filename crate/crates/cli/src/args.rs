use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Solve, simulate and validate the shared-bus cache-coherence models.
///
/// Every value option can also be given in a `--config` file as
/// `key = value`, using the long flag name as the key. Command-line flags win.
#[derive(Debug, Parser)]
#[command(name = "bcm", version)]
pub struct Cli {
    /// Configuration file of `key = value` lines (`#` starts a comment).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Markov chain for one point or a comma-separated sweep.
    Solve(SolveArgs),
    /// Recompute all 160 published ANBC cells and compare.
    ValidateTables(ValidateArgs),
    /// Write ANPEC-versus-N curves, one CSV per (p, mu2).
    FigureData(FigureArgs),
    /// Run independent simulation replications.
    Simulate(SimulateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::ValidateTables(_) => "validate-tables",
            Command::FigureData(_) => "figure-data",
            Command::Simulate(_) => "simulate",
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// fcfs, priority, or a comma list [default: priority]
    #[arg(long, value_name = "LIST")]
    pub discipline: Option<String>,
    /// Number of processors, or a comma list [default: 4]
    #[arg(long, value_name = "LIST")]
    pub n: Option<String>,
    /// Think rate, or a comma list [default: 0.001]
    #[arg(long, value_name = "LIST")]
    pub lambda: Option<String>,
    /// Blocking service rate [default: 0.1]
    #[arg(long, value_name = "RATE")]
    pub mu1: Option<String>,
    /// Write-back service rate [default: 0.01]
    #[arg(long, value_name = "RATE")]
    pub mu2: Option<String>,
    /// Probability of resuming without a write-back [default: 0.8]
    #[arg(long, value_name = "PROB")]
    pub p: Option<String>,
    /// direct or iterative [default: per chain size]
    #[arg(long, value_name = "METHOD")]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Relative tolerance on ANBC cells [default: 1e-4]
    #[arg(long, value_name = "REL")]
    pub tolerance: Option<String>,
    /// Absolute tolerance on % difference cells, in percentage points [default: 1e-3]
    #[arg(long, value_name = "ABS")]
    pub pct_tolerance: Option<String>,
    /// direct or iterative [default: per chain size]
    #[arg(long, value_name = "METHOD")]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Resume probabilities [default: 0.8,0.9]
    #[arg(long, value_name = "LIST")]
    pub p_list: Option<String>,
    /// Write-back service rates [default: 0.01,0.0066666667]
    #[arg(long, value_name = "LIST")]
    pub mu2_list: Option<String>,
    /// Think rates [default: 0.001,0.002,...,0.010]
    #[arg(long, value_name = "LIST")]
    pub lambda_list: Option<String>,
    /// Largest processor count [default: 12]
    #[arg(long, value_name = "N")]
    pub n_max: Option<String>,
    /// fcfs or priority [default: priority]
    #[arg(long, value_name = "DISCIPLINE")]
    pub discipline: Option<String>,
    /// Blocking service rate [default: 0.1]
    #[arg(long, value_name = "RATE")]
    pub mu1: Option<String>,
    /// Output directory [default: .]
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<String>,
    /// Also write one SVG chart per CSV
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// fcfs, priority, or a comma list [default: priority]
    #[arg(long, value_name = "LIST")]
    pub discipline: Option<String>,
    /// Number of processors [default: 4]
    #[arg(long, value_name = "N")]
    pub n: Option<String>,
    /// Think rate [default: 0.001]
    #[arg(long, value_name = "RATE")]
    pub lambda: Option<String>,
    /// Probability of resuming without a write-back [default: 0.8]
    #[arg(long, value_name = "PROB")]
    pub p: Option<String>,
    /// Exponential blocking service rate, used when --dist1 is absent [default: 0.1]
    #[arg(long, value_name = "RATE")]
    pub mu1: Option<String>,
    /// Exponential write-back service rate, used when --dist2 is absent [default: 0.01]
    #[arg(long, value_name = "RATE")]
    pub mu2: Option<String>,
    /// Blocking service distribution: exp:R, det:D, erlang:K:R or hyper:W,..:R,..
    #[arg(long, value_name = "DIST")]
    pub dist1: Option<String>,
    /// Write-back service distribution, same syntax as --dist1
    #[arg(long, value_name = "DIST")]
    pub dist2: Option<String>,
    /// Simulated time per replication [default: 2e6]
    #[arg(long, value_name = "T")]
    pub horizon: Option<String>,
    /// Discarded initial time per replication [default: 1e5]
    #[arg(long, value_name = "T")]
    pub warmup: Option<String>,
    /// Number of replications [default: 20]
    #[arg(long, value_name = "R")]
    pub reps: Option<String>,
    /// Base seed [default: 20090501]
    #[arg(long, value_name = "SEED")]
    pub seed: Option<String>,
    /// Confidence level [default: 0.99]
    #[arg(long, value_name = "LEVEL")]
    pub ci: Option<String>,
    /// Emit one run record per discipline instead of one row per metric
    #[arg(long)]
    pub record: bool,
}
