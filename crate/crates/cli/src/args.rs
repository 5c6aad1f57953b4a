use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Exact envy minimization for graphical house allocation.
#[derive(Debug, Parser)]
#[command(name = "haan", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file and write a result file.
    Solve(SolveArgs),
    /// Generate a reduction instance from a source graph.
    Generate(GenerateArgs),
    /// Evaluate an allocation (or result) file against an instance file.
    Verify(VerifyArgs),
    /// Run several solvers over a directory of instance files.
    Bench(BenchArgs),
}

/// Solver knobs shared by `solve` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct SolverOpts {
    /// `envy`, or `envy-happy` to break ties by happiness.
    #[arg(long, default_value = "envy")]
    pub objective: String,
    /// Worker threads; defaults to $HAAN_WORKERS, else all cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Maximum number of explored guesses before giving up.
    #[arg(long)]
    pub guess_limit: Option<u64>,
    /// Cap on separator size for the separator solver.
    #[arg(long)]
    pub separator_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    /// brute, d1, envy-guess, separator, vc-xp or auto.
    #[arg(short, long, default_value = "auto")]
    pub algo: String,
    #[command(flatten)]
    pub solver: SolverOpts,
    /// Vertex cover for vc-xp, as comma-separated agents (may be empty).
    #[arg(long)]
    pub cover: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time in the result.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// clique-bip-d2, halfsep-3reg, clique-vc-bip or clique-vc-split.
    pub family: String,
    /// Source graph: k3, k4, k5, prism, petersen, cycle:N,
    /// random-regular:N:D[:SEED] or file:PATH.
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub k: usize,
    /// Copies per edge for clique-vc-split.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Isolated vertices added for clique-vc-bip.
    #[arg(long, default_value_t = 0)]
    pub t_pad: usize,
    /// Seed for random source graphs.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the forward-direction witness allocation here.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
    /// Clique for the witness (comma-separated); searched for when absent.
    #[arg(long)]
    pub clique: Option<String>,
    /// Half separator for the witness as `S/X/Y`, each comma-separated;
    /// searched for when absent.
    #[arg(long)]
    pub separator: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// Allocation or result file.
    pub allocation: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of `*.haan` instance files.
    pub corpus: PathBuf,
    /// Comma-separated solvers.
    #[arg(long, default_value = "brute,d1,envy-guess,separator,vc-xp")]
    pub algos: String,
    /// Per-run wall-clock limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub timeout: f64,
    #[command(flatten)]
    pub solver: SolverOpts,
    /// Run instances concurrently.
    #[arg(long)]
    pub parallel: bool,
}
