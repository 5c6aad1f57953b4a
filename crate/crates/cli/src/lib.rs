//! Command-line front end for the `haan` solvers: the `haan/1` file formats,
//! named source graphs, and the `solve`, `generate`, `verify` and `bench`
//! subcommands.
//!
//! Standard output only ever carries machine-readable documents; diagnostics
//! go to standard error.

use std::path::PathBuf;

use thiserror::Error;

pub mod args;
pub mod commands;
pub mod format;
pub mod graphs;

pub use args::Cli;
pub use commands::run;

/// Process exit codes. Stable; documented in the README.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const INVALID_INSTANCE: i32 = 4;
    pub const INFEASIBLE: i32 = 5;
    pub const BUDGET: i32 = 6;
    pub const WRONG_SOLVER: i32 = 7;
    pub const UNKNOWN_ALGORITHM: i32 = 8;
    pub const INVALID_ALLOCATION: i32 = 9;
    pub const GENERATOR: i32 = 10;
    pub const NO_FEASIBLE: i32 = 11;
    pub const BAD_PARAMETER: i32 = 12;
    pub const CANCELLED: i32 = 13;
    pub const DISAGREEMENT: i32 = 14;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    In { path: PathBuf, source: Box<CliError> },
    #[error(transparent)]
    Core(#[from] haan::Error),
    #[error("{0}")]
    Usage(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("allocation leaves agent {0} outside its feasibility set")]
    Infeasible(usize),
    #[error("{0} instance(s) with disagreeing solvers")]
    Disagreement(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use haan::Error as E;
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Parse { .. } => exit::PARSE,
            CliError::In { source, .. } => source.exit_code(),
            CliError::Usage(_) => exit::USAGE,
            CliError::NoWitness(_) => exit::GENERATOR,
            CliError::Infeasible(_) => exit::INVALID_ALLOCATION,
            CliError::Disagreement(_) => exit::DISAGREEMENT,
            CliError::Core(e) => match e {
                E::InvalidInstance(_) | E::InvalidGraph(_) => exit::INVALID_INSTANCE,
                E::InvalidAllocation(_) => exit::INVALID_ALLOCATION,
                E::InstanceInfeasible { .. } => exit::INFEASIBLE,
                E::BudgetExceeded { .. } => exit::BUDGET,
                E::Cancelled => exit::CANCELLED,
                E::WrongSolver { .. } => exit::WRONG_SOLVER,
                E::UnknownAlgorithm(_) => exit::UNKNOWN_ALGORITHM,
                E::NoFeasibleAllocation => exit::NO_FEASIBLE,
                E::NotRegular
                | E::NotThreeRegular
                | E::BadK(_)
                | E::BadT(_)
                | E::NotAClique(_)
                | E::BadPartition(_) => exit::GENERATOR,
                E::NotACover(..) | E::InvalidConfig(_) | E::TooLarge(_) => exit::BAD_PARAMETER,
            },
        }
    }
}
