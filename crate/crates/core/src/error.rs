use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("instance has {agents} agents but only {houses} houses")]
    InstanceInfeasible { agents: usize, houses: usize },

    #[error("guess budget of {limit} exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("search cancelled")]
    Cancelled,

    #[error("solver {solver} does not apply: {reason}")]
    WrongSolver { solver: &'static str, reason: String },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("no allocation respects the feasibility sets")]
    NoFeasibleAllocation,

    #[error("supplied set is not a vertex cover: edge ({0}, {1}) is uncovered")]
    NotACover(usize, usize),

    #[error("source graph is not regular")]
    NotRegular,

    #[error("source graph is not 3-regular")]
    NotThreeRegular,

    #[error("bad k: {0}")]
    BadK(String),

    #[error("bad padding parameter t: {0}")]
    BadT(String),

    #[error("not a clique of the required size: {0}")]
    NotAClique(String),

    #[error("bad separator partition: {0}")]
    BadPartition(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("instance too large for this solver: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
