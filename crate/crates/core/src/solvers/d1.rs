//! Single-preference instances as one min-cost matching.
//!
//! When every agent likes exactly one house, giving house `h` to agent `a`
//! makes envious exactly those neighbours whose only liked house is `h`, so
//! the envy of an allocation is the sum of these per-assignment counts.

use super::{empty_result, finish, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::matching::{min_cost_max_matching, BipartiteGraph};
use crate::model::{Allocation, Instance};

pub fn solve_d1_matching(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    let n = inst.n_agents();
    let m = inst.n_houses();
    if let Some(a) = (0..n).find(|&a| inst.preferences(a).len() != 1) {
        return Err(Error::WrongSolver {
            solver: "d1",
            reason: format!(
                "agent {a} likes {} houses; every agent must like exactly one",
                inst.preferences(a).len()
            ),
        });
    }
    inst.check_houses_suffice()?;
    cfg.workers()?;
    if n == 0 {
        return Ok(empty_result("d1"));
    }
    let budget = cfg.budget();
    budget.tick()?;

    let scale = if cfg.objective.wants_happiness() { n as i64 + 1 } else { 1 };
    let mut g = BipartiteGraph::new(n, m);
    let mut w = vec![0i64; m];
    for a in 0..n {
        w.fill(0);
        for &b in inst.neighbors(a) {
            w[inst.preferences(b)[0]] += 1;
        }
        for h in 0..m {
            let happy = cfg.objective.wants_happiness() && inst.prefers(a, h);
            g.push(a, h, scale * w[h] - happy as i64);
        }
    }
    let matching = min_cost_max_matching(&g);
    debug_assert_eq!(matching.size(), n);
    let houses = matching
        .left_mates(n)
        .into_iter()
        .map(|h| h.expect("complete bipartite graph with m >= n has a perfect matching"))
        .collect();
    Ok(finish(inst, Allocation::new(houses), "d1", budget.explored()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Objective;

    #[test]
    fn isolated_agents_with_distinct_houses() {
        let inst = Instance::new(2, 2, vec![], vec![vec![0], vec![1]]).unwrap();
        let r = solve_d1_matching(&inst, &SolverConfig::default()).unwrap();
        assert_eq!((r.min_envy, r.happiness), (0, 2));
        assert_eq!(r.guesses_explored, 1);
    }

    #[test]
    fn star_with_shared_house() {
        let inst = Instance::new(3, 3, vec![(0, 1), (0, 2)], vec![vec![0]; 3]).unwrap();
        assert_eq!(solve_d1_matching(&inst, &SolverConfig::default()).unwrap().min_envy, 1);
    }

    #[test]
    fn happiness_tie_break() {
        let inst = Instance::new(2, 2, vec![], vec![vec![0], vec![0]]).unwrap();
        let cfg = SolverConfig::with_objective(Objective::MinEnvyThenMaxHappy);
        let r = solve_d1_matching(&inst, &cfg).unwrap();
        assert_eq!((r.min_envy, r.happiness), (0, 1));
    }

    #[test]
    fn rejects_larger_preferences() {
        let inst = Instance::new(1, 2, vec![], vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            solve_d1_matching(&inst, &SolverConfig::default()),
            Err(Error::WrongSolver { solver: "d1", .. })
        ));
    }
}
