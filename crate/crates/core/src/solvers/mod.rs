//! The exact solvers and the dispatcher.
//!
//! Every solver minimizes the number of envious agents; with
//! [`Objective::MinEnvyThenMaxHappy`] ties are broken towards more happy
//! agents. Both objectives are folded into one integer key,
//! `(n + 1) * envy - happy`, which is exact because happiness never exceeds n.

mod brute;
mod d1;
mod envy_guess;
mod search;
mod separator;
mod vertex_cover;

use std::str::FromStr;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graphtools::find_min_vertex_cover;
use crate::model::{evaluate, evaluate_annotated, Allocation, AnnotatedInstance, Instance};

pub use brute::solve_bruteforce;
pub use d1::solve_d1_matching;
pub use envy_guess::solve_envy_guess;
pub use separator::solve_separator;
pub use vertex_cover::solve_vertex_cover_xp;

/// Default cap on explored guesses.
pub const DEFAULT_GUESS_LIMIT: u64 = 1 << 24;

/// Cover-size threshold under which `auto` picks the vertex-cover solver.
pub const AUTO_COVER_THRESHOLD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    #[default]
    MinEnvy,
    MinEnvyThenMaxHappy,
}

impl Objective {
    pub(crate) fn key(self, n: usize, envy: usize, happy: usize) -> i64 {
        match self {
            Objective::MinEnvy => envy as i64,
            Objective::MinEnvyThenMaxHappy => (n as i64 + 1) * envy as i64 - happy as i64,
        }
    }

    pub(crate) fn wants_happiness(self) -> bool {
        self == Objective::MinEnvyThenMaxHappy
    }

    pub fn label(self) -> &'static str {
        match self {
            Objective::MinEnvy => "envy",
            Objective::MinEnvyThenMaxHappy => "envy-happy",
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "envy" => Ok(Objective::MinEnvy),
            "envy-happy" => Ok(Objective::MinEnvyThenMaxHappy),
            other => Err(Error::InvalidConfig(format!("unknown objective `{other}`"))),
        }
    }
}

/// Separator size cap used by the separator solver at every recursion level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparatorPolicy {
    /// Smallest balanced separator, uncapped.
    #[default]
    Auto,
    /// At most this many vertices; falls back to `Auto` where none exists.
    Max(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Workers(usize),
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub objective: Objective,
    pub separator_size_policy: SeparatorPolicy,
    pub parallelism: Parallelism,
    pub guess_limit: u64,
    /// Cooperative cancellation, polled at every explored guess.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            objective: Objective::MinEnvy,
            separator_size_policy: SeparatorPolicy::Auto,
            parallelism: Parallelism::Auto,
            guess_limit: DEFAULT_GUESS_LIMIT,
            cancel: None,
        }
    }
}

impl SolverConfig {
    pub fn with_objective(objective: Objective) -> Self {
        SolverConfig {
            objective,
            ..SolverConfig::default()
        }
    }

    pub(crate) fn workers(&self) -> Result<usize> {
        if self.guess_limit == 0 {
            return Err(Error::InvalidConfig("guess limit must be at least 1".into()));
        }
        match self.parallelism {
            Parallelism::Workers(0) => Err(Error::InvalidConfig("worker count must be at least 1".into())),
            Parallelism::Workers(w) => Ok(w),
            Parallelism::Auto => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
        }
    }

    pub(crate) fn budget(&self) -> search::Budget {
        search::Budget::new(self.guess_limit, self.cancel.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub min_envy: usize,
    pub happiness: usize,
    pub allocation: Allocation,
    pub solver_id: &'static str,
    pub guesses_explored: u64,
}

pub(crate) fn finish(
    inst: &Instance,
    allocation: Allocation,
    solver_id: &'static str,
    guesses_explored: u64,
) -> SolveResult {
    let report = evaluate(inst, &allocation).expect("solver produced a valid allocation");
    SolveResult {
        min_envy: report.n_envious,
        happiness: report.n_happy,
        allocation,
        solver_id,
        guesses_explored,
    }
}

pub(crate) fn finish_annotated(
    ann: &AnnotatedInstance,
    allocation: Allocation,
    solver_id: &'static str,
    guesses_explored: u64,
) -> SolveResult {
    let (ok, report) = evaluate_annotated(ann, &allocation).expect("solver produced a valid allocation");
    debug_assert!(ok, "solver ignored feasibility sets");
    SolveResult {
        min_envy: report.n_envious,
        happiness: report.n_happy,
        allocation,
        solver_id,
        guesses_explored,
    }
}

pub(crate) fn empty_result(solver_id: &'static str) -> SolveResult {
    SolveResult {
        min_envy: 0,
        happiness: 0,
        allocation: Allocation::new(Vec::new()),
        solver_id,
        guesses_explored: 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Brute,
    D1,
    EnvyGuess,
    Separator,
    VcXp,
    Auto,
}

impl Algorithm {
    pub const CONCRETE: [Algorithm; 5] = [
        Algorithm::Brute,
        Algorithm::D1,
        Algorithm::EnvyGuess,
        Algorithm::Separator,
        Algorithm::VcXp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::D1 => "d1",
            Algorithm::EnvyGuess => "envy-guess",
            Algorithm::Separator => "separator",
            Algorithm::VcXp => "vc-xp",
            Algorithm::Auto => "auto",
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "brute" => Algorithm::Brute,
            "d1" => Algorithm::D1,
            "envy-guess" => Algorithm::EnvyGuess,
            "separator" => Algorithm::Separator,
            "vc-xp" => Algorithm::VcXp,
            "auto" => Algorithm::Auto,
            other => return Err(Error::UnknownAlgorithm(other.to_string())),
        })
    }
}

/// The concrete algorithm `auto` would run on `inst`.
pub fn auto_choice(inst: &Instance) -> Algorithm {
    let n = inst.n_agents();
    if (0..n).all(|a| inst.preferences(a).len() == 1) {
        Algorithm::D1
    } else if find_min_vertex_cover(inst.graph(), AUTO_COVER_THRESHOLD).is_some() {
        Algorithm::VcXp
    } else if n + 2 * inst.edges().len() <= 30 {
        Algorithm::EnvyGuess
    } else {
        Algorithm::Separator
    }
}

/// Runs `algo` on `inst`.
pub fn solve(inst: &Instance, algo: Algorithm, cfg: &SolverConfig) -> Result<SolveResult> {
    match algo {
        Algorithm::Brute => solve_bruteforce(inst, cfg),
        Algorithm::D1 => solve_d1_matching(inst, cfg),
        Algorithm::EnvyGuess => solve_envy_guess(inst, cfg),
        Algorithm::Separator => solve_separator(&AnnotatedInstance::plain(inst.clone()), cfg),
        Algorithm::VcXp => solve_vertex_cover_xp(inst, None, cfg),
        Algorithm::Auto => solve(inst, auto_choice(inst), cfg),
    }
}

/// Like [`solve`], taking the algorithm by name.
pub fn solve_named(inst: &Instance, algo: &str, cfg: &SolverConfig) -> Result<SolveResult> {
    solve(inst, algo.parse()?, cfg)
}
