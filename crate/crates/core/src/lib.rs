//! Exact solvers for envy minimization in graphical house allocation.
//!
//! Agents sit on a graph and each likes a set of houses. An agent is envious
//! when it does not get a house it likes while some neighbour does. The
//! solvers find allocations minimizing the number of envious agents, with an
//! optional secondary objective maximizing the number of happy agents.

pub mod error;
pub mod graph;
pub mod graphtools;
pub mod matching;
pub mod model;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{
    evaluate, evaluate_annotated, validate_instance, Allocation, AnnotatedInstance, EnvyReport,
    Instance, RawInstance,
};
pub use solvers::{
    solve, solve_bruteforce, solve_d1_matching, solve_envy_guess, solve_named, solve_separator,
    solve_vertex_cover_xp, Algorithm, Objective, Parallelism, SeparatorPolicy, SolveResult,
    SolverConfig,
};
