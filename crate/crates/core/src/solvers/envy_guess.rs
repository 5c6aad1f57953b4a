//! Guess who envies whom, then who is happy, and test the guess with one
//! bipartite matching.
//!
//! A guess fixes `E(a) ⊆ N(a)` for every agent and a set `C` of happy agents
//! among those with `E(a) = ∅`. Agents with `E(a) ≠ ∅` take a house outside
//! their preferences and their guessed targets take houses they like; agents
//! in `C` take a house they like; the other calm agents only keep their
//! neighbours off their preferences. A guess is realizable iff every agent
//! can be matched to a compatible house, and the realized envy is then
//! exactly `|{a : E(a) ≠ ∅}|` and the happiness at least `|C|`.
//!
//! Guesses are tried level by level in the number of envious agents, so the
//! first level with a realizable guess is optimal.

use fixedbitset::FixedBitSet;

use super::search::{run_tasks, Best, Budget};
use super::{empty_result, finish, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::matching::{max_cardinality_matching, BipartiteGraph};
use crate::model::{Allocation, Instance};
use crate::Objective;

/// Aim for at least this many top-level tasks...
const MIN_TASKS: u64 = 256;
/// ...but never more than this many.
const MAX_TASKS: u64 = 4096;

pub fn solve_envy_guess(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    inst.check_houses_suffice()?;
    let workers = cfg.workers()?;
    let n = inst.n_agents();
    if n == 0 {
        return Ok(empty_result("envy-guess"));
    }
    if n > 63 {
        return Err(Error::TooLarge(format!("{n} agents; envy guessing supports at most 63")));
    }
    let mut choices = Vec::with_capacity(n);
    for a in 0..n {
        let deg = inst.neighbors(a).len();
        if inst.preferences(a).is_empty() || deg == 0 {
            choices.push(1u64);
        } else if deg >= 63 {
            return Err(Error::TooLarge(format!("agent {a} has degree {deg}")));
        } else {
            choices.push(1u64 << deg);
        }
    }
    // can_envy[a]: agents from a on that could be envious
    let mut can_envy = vec![0; n + 1];
    for a in (0..n).rev() {
        can_envy[a] = can_envy[a + 1] + (choices[a] > 1) as usize;
    }
    let mut prefix = 0;
    let mut n_tasks = 1u64;
    while prefix < n && n_tasks < MIN_TASKS && n_tasks * choices[prefix] <= MAX_TASKS {
        n_tasks *= choices[prefix];
        prefix += 1;
    }

    let budget = cfg.budget();
    for target in 0..=can_envy[0] {
        let ctx = Ctx {
            inst,
            objective: cfg.objective,
            budget: &budget,
            choices: &choices,
            can_envy: &can_envy,
            target,
        };
        let best = run_tasks(n_tasks as usize, workers, |rank, bound| {
            let mut masks = vec![0u64; n];
            let mut r = rank as u64;
            for a in (0..prefix).rev() {
                masks[a] = r % choices[a];
                r /= choices[a];
            }
            let envious = masks[..prefix].iter().filter(|&&m| m != 0).count();
            let mut best = Best::below(bound);
            if ctx.reachable(prefix, envious) && !best.dominated(ctx.lower_bound()) {
                ctx.dfs(&mut masks, prefix, envious, &mut best)?;
            }
            Ok(best.into_option())
        })?;
        if let Some((_, houses)) = best {
            return Ok(finish(inst, Allocation::new(houses), "envy-guess", budget.explored()));
        }
    }
    unreachable!("the exact guess of an optimal allocation lies on some level")
}

struct Ctx<'a> {
    inst: &'a Instance,
    objective: Objective,
    budget: &'a Budget,
    choices: &'a [u64],
    can_envy: &'a [usize],
    /// Exact number of envious agents at this level.
    target: usize,
}

impl Ctx<'_> {
    fn lower_bound(&self) -> i64 {
        let n = self.inst.n_agents();
        self.objective.key(n, self.target, n - self.target)
    }

    /// Whether agents `a..` can still bring the envy count to the target.
    fn reachable(&self, a: usize, envious: usize) -> bool {
        envious <= self.target && envious + self.can_envy[a] >= self.target
    }

    fn dfs(&self, masks: &mut [u64], a: usize, envious: usize, best: &mut Best<Vec<usize>>) -> Result<()> {
        if a == masks.len() {
            return self.guess_happy(masks, best);
        }
        self.budget.check_cancel()?;
        for mask in 0..self.choices[a] {
            let e = envious + (mask != 0) as usize;
            if !self.reachable(a + 1, e) {
                continue;
            }
            masks[a] = mask;
            self.dfs(masks, a + 1, e, best)?;
            if best.dominated(self.lower_bound()) {
                break;
            }
        }
        masks[a] = 0;
        Ok(())
    }

    fn guess_happy(&self, masks: &[u64], best: &mut Best<Vec<usize>>) -> Result<()> {
        let inst = self.inst;
        let n = inst.n_agents();
        // an isolated agent outside C constrains nobody, so under plain envy
        // minimization it never needs to be guessed happy
        let calm: Vec<usize> = (0..n)
            .filter(|&a| masks[a] == 0 && !inst.preferences(a).is_empty())
            .filter(|&a| self.objective != Objective::MinEnvy || !inst.neighbors(a).is_empty())
            .collect();
        let mut in_c = vec![false; n];
        // larger happy sets first
        for c_mask in (0..1u64 << calm.len()).rev() {
            let key = self.objective.key(n, self.target, c_mask.count_ones() as usize);
            if best.dominated(key) {
                continue;
            }
            self.budget.tick()?;
            for (i, &a) in calm.iter().enumerate() {
                in_c[a] = c_mask >> i & 1 == 1;
            }
            if let Some(houses) = self.realize(masks, &in_c) {
                let happy = (0..n).filter(|&a| inst.preference_bits(a).contains(houses[a])).count();
                best.offer(self.objective.key(n, self.target, happy), || houses);
                if best.dominated(self.lower_bound()) {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// Trims every agent's compatible houses and looks for a perfect
    /// agent-side matching.
    fn realize(&self, masks: &[u64], in_c: &[bool]) -> Option<Vec<usize>> {
        let inst = self.inst;
        let n = inst.n_agents();
        let m = inst.n_houses();
        let mut feasible: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut f = inst.preference_bits(a).clone();
                f.grow(m);
                if !in_c[a] {
                    if masks[a] == 0 {
                        f.insert_range(..);
                    } else {
                        f.toggle_range(..);
                    }
                }
                f
            })
            .collect();
        for b in 0..n {
            let pb = inst.preference_bits(b);
            for (i, &a) in inst.neighbors(b).iter().enumerate() {
                if masks[b] >> i & 1 == 1 {
                    feasible[a].intersect_with(pb);
                } else if !in_c[b] {
                    feasible[a].difference_with(pb);
                }
            }
        }
        if feasible.iter().any(|f| f.is_clear()) {
            return None;
        }
        let mut g = BipartiteGraph::new(n, m);
        for (a, f) in feasible.iter().enumerate() {
            for h in f.ones() {
                g.push(a, h, 0);
            }
        }
        let matching = max_cardinality_matching(&g);
        if matching.size() < n {
            return None;
        }
        Some(matching.left_mates(n).into_iter().map(|h| h.unwrap()).collect())
    }
}
