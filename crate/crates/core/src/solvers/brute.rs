//! Exhaustive enumeration of injective assignments, the reference oracle.
//!
//! Dummy houses are interchangeable, so each agent only tries the smallest
//! unused one; this keeps the first optimum in lexicographic order while
//! skipping symmetric copies. Partial envy only grows as agents are placed,
//! which gives a sound bound for cutting branches that cannot win. Every
//! visited search node, complete or partial, counts as an explored guess.

use super::search::{run_tasks, Best, Budget};
use super::{empty_result, finish, SolveResult, SolverConfig};
use crate::error::Result;
use crate::model::{Allocation, Instance};
use crate::Objective;

pub fn solve_bruteforce(inst: &Instance, cfg: &SolverConfig) -> Result<SolveResult> {
    inst.check_houses_suffice()?;
    let workers = cfg.workers()?;
    if inst.n_agents() == 0 {
        return Ok(empty_result("brute"));
    }
    let budget = cfg.budget();
    let dummies = inst.dummy_houses();
    let mut is_dummy = vec![false; inst.n_houses()];
    for &h in &dummies {
        is_dummy[h] = true;
    }
    let ctx = Ctx {
        inst,
        objective: cfg.objective,
        budget: &budget,
        is_dummy: &is_dummy,
        dummies: &dummies,
    };
    let first: Vec<usize> = {
        let probe = State::new(inst);
        ctx.candidates(&probe)
    };
    let best = run_tasks(first.len(), workers, |t, bound| {
        let mut st = State::new(inst);
        let mut best = Best::below(bound);
        let undo = ctx.assign(&mut st, 0, first[t]);
        ctx.dfs(&mut st, 1, &mut best)?;
        ctx.unassign(&mut st, 0, undo);
        Ok(best.into_option())
    })?;
    let (_, houses) = best.expect("m >= n admits an allocation");
    Ok(finish(inst, Allocation::new(houses), "brute", budget.explored()))
}

struct Ctx<'a> {
    inst: &'a Instance,
    objective: Objective,
    budget: &'a Budget,
    is_dummy: &'a [bool],
    dummies: &'a [usize],
}

struct State {
    houses: Vec<usize>,
    used: Vec<bool>,
    envious: Vec<bool>,
    happy: Vec<bool>,
    n_envious: usize,
    n_happy: usize,
    next_dummy: usize,
}

impl State {
    fn new(inst: &Instance) -> Self {
        let n = inst.n_agents();
        State {
            houses: vec![usize::MAX; n],
            used: vec![false; inst.n_houses()],
            envious: vec![false; n],
            happy: vec![false; n],
            n_envious: 0,
            n_happy: 0,
            next_dummy: 0,
        }
    }
}

impl Ctx<'_> {
    fn candidates(&self, st: &State) -> Vec<usize> {
        let next_dummy = self.dummies.get(st.next_dummy).copied();
        (0..self.inst.n_houses())
            .filter(|&h| !st.used[h] && (!self.is_dummy[h] || Some(h) == next_dummy))
            .collect()
    }

    /// Places agent `a` (all agents before it are placed) and returns the
    /// earlier agents that became envious.
    fn assign(&self, st: &mut State, a: usize, h: usize) -> Vec<usize> {
        st.houses[a] = h;
        st.used[h] = true;
        if self.is_dummy[h] {
            st.next_dummy += 1;
        }
        let happy = self.inst.prefers(a, h);
        st.happy[a] = happy;
        st.n_happy += happy as usize;
        let mut flipped = Vec::new();
        for &b in self.inst.neighbors(a).iter().take_while(|&&b| b < a) {
            if !happy && !st.envious[a] && self.inst.prefers(a, st.houses[b]) {
                st.envious[a] = true;
                st.n_envious += 1;
            }
            if !st.happy[b] && !st.envious[b] && self.inst.prefers(b, h) {
                st.envious[b] = true;
                st.n_envious += 1;
                flipped.push(b);
            }
        }
        flipped
    }

    fn unassign(&self, st: &mut State, a: usize, flipped: Vec<usize>) {
        for b in flipped {
            st.envious[b] = false;
            st.n_envious -= 1;
        }
        if st.envious[a] {
            st.envious[a] = false;
            st.n_envious -= 1;
        }
        if st.happy[a] {
            st.happy[a] = false;
            st.n_happy -= 1;
        }
        let h = st.houses[a];
        if self.is_dummy[h] {
            st.next_dummy -= 1;
        }
        st.used[h] = false;
        st.houses[a] = usize::MAX;
    }

    fn lower_bound(&self, st: &State, placed: usize) -> i64 {
        let n = self.inst.n_agents();
        let optimistic_happy = st.n_happy + (n - placed);
        match self.objective {
            Objective::MinEnvy => st.n_envious as i64,
            Objective::MinEnvyThenMaxHappy => {
                (n as i64 + 1) * st.n_envious as i64 - optimistic_happy as i64
            }
        }
    }

    fn dfs(&self, st: &mut State, a: usize, best: &mut Best<Vec<usize>>) -> Result<()> {
        let n = self.inst.n_agents();
        // every visited node counts, so heavy pruning cannot hide unbounded work
        self.budget.tick()?;
        if a == n {
            let key = self.objective.key(n, st.n_envious, st.n_happy);
            best.offer(key, || st.houses.clone());
            return Ok(());
        }
        if best.dominated(self.lower_bound(st, a)) {
            return Ok(());
        }
        for h in self.candidates(st) {
            let flipped = self.assign(st, a, h);
            let r = self.dfs(st, a + 1, best);
            self.unassign(st, a, flipped);
            r?;
        }
        Ok(())
    }
}
