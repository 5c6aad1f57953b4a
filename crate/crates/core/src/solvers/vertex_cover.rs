//! XP in the vertex cover number: guess the houses of the cover agents and
//! which of them stay calm, then place everyone else by one min-cost
//! matching.
//!
//! Outside the cover the agents form an independent set, so their envy only
//! depends on the (guessed) houses of their cover neighbours.

use fixedbitset::FixedBitSet;

use super::search::{run_tasks, Best, Budget};
use super::{empty_result, finish, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::graphtools::{check_vertex_cover, find_min_vertex_cover};
use crate::matching::{min_cost_max_matching, BipartiteGraph};
use crate::model::{Allocation, Instance};
use crate::Objective;

/// Solves `inst` using `cover` (validated) or, when absent, the
/// lexicographically first minimum vertex cover.
pub fn solve_vertex_cover_xp(inst: &Instance, cover: Option<&[usize]>, cfg: &SolverConfig) -> Result<SolveResult> {
    let n = inst.n_agents();
    let cover: Vec<usize> = match cover {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_unstable();
            if let Some(&v) = c.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidInstance(format!("cover vertex {v} out of range")));
            }
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance("cover lists a vertex twice".into()));
            }
            check_vertex_cover(inst.graph(), &c).map_err(|(u, v)| Error::NotACover(u, v))?;
            c
        }
        None => find_min_vertex_cover(inst.graph(), n).expect("the full vertex set is a cover"),
    };
    if cover.len() > 63 {
        return Err(Error::TooLarge(format!("vertex cover of size {}", cover.len())));
    }
    inst.check_houses_suffice()?;
    let workers = cfg.workers()?;
    if n == 0 {
        return Ok(empty_result("vc-xp"));
    }

    let m = inst.n_houses();
    let dummies = inst.dummy_houses();
    let mut is_dummy = vec![false; m];
    for &h in &dummies {
        is_dummy[h] = true;
    }
    let mut in_cover = vec![false; n];
    for &s in &cover {
        in_cover[s] = true;
    }
    let budget = cfg.budget();
    let ctx = Ctx {
        inst,
        objective: cfg.objective,
        budget: &budget,
        cover: &cover,
        in_cover: &in_cover,
        outside: (0..n).filter(|&a| !in_cover[a]).collect(),
        is_dummy: &is_dummy,
        dummies: &dummies,
    };
    let first: Vec<usize> = if cover.is_empty() {
        vec![usize::MAX]
    } else {
        ctx.candidates(&vec![false; m], 0)
    };
    let best = run_tasks(first.len(), workers, |t, bound| {
        let mut best = Best::below(bound);
        let mut used = vec![false; m];
        let mut phi = vec![usize::MAX; cover.len()];
        if cover.is_empty() {
            ctx.guess_calm(&phi, &used, &mut best)?;
        } else {
            let h = first[t];
            phi[0] = h;
            used[h] = true;
            ctx.dfs(&mut phi, &mut used, 1, is_dummy[h] as usize, &mut best)?;
        }
        Ok(best.into_option())
    })?;
    let (_, houses) = best.expect("some guess is always realizable when m >= n");
    Ok(finish(inst, Allocation::new(houses), "vc-xp", budget.explored()))
}

struct Ctx<'a> {
    inst: &'a Instance,
    objective: Objective,
    budget: &'a Budget,
    cover: &'a [usize],
    in_cover: &'a [bool],
    outside: Vec<usize>,
    is_dummy: &'a [bool],
    dummies: &'a [usize],
}

impl Ctx<'_> {
    /// Unused houses for the next cover agent; dummies are interchangeable,
    /// so only the smallest unused one is offered.
    fn candidates(&self, used: &[bool], dummies_used: usize) -> Vec<usize> {
        let next_dummy = self.dummies.get(dummies_used).copied();
        (0..self.inst.n_houses())
            .filter(|&h| !used[h] && (!self.is_dummy[h] || Some(h) == next_dummy))
            .collect()
    }

    fn dfs(
        &self,
        phi: &mut [usize],
        used: &mut [bool],
        i: usize,
        dummies_used: usize,
        best: &mut Best<Vec<usize>>,
    ) -> Result<()> {
        if i == phi.len() {
            return self.guess_calm(phi, used, best);
        }
        self.budget.check_cancel()?;
        for h in self.candidates(used, dummies_used) {
            phi[i] = h;
            used[h] = true;
            let r = self.dfs(phi, used, i + 1, dummies_used + self.is_dummy[h] as usize, best);
            used[h] = false;
            r?;
        }
        phi[i] = usize::MAX;
        Ok(())
    }

    fn guess_calm(&self, phi: &[usize], used: &[bool], best: &mut Best<Vec<usize>>) -> Result<()> {
        let inst = self.inst;
        let n = inst.n_agents();
        let k = self.cover.len();
        let mut house_of = vec![usize::MAX; n];
        for (i, &s) in self.cover.iter().enumerate() {
            house_of[s] = phi[i];
        }
        let happy_cover = self.cover.iter().filter(|&&s| inst.prefers(s, house_of[s])).count();
        // cover agents already envious of another cover agent
        let envious_inside = |s: usize| {
            !inst.prefers(s, house_of[s])
                && inst
                    .neighbors(s)
                    .iter()
                    .any(|&t| self.in_cover[t] && inst.prefers(s, house_of[t]))
        };
        let free: Vec<usize> = self.cover.iter().copied().filter(|&s| !envious_inside(s)).collect();
        // outside agents that see a liked house in the cover
        let threatened: Vec<bool> = (0..n)
            .map(|a| {
                !self.in_cover[a] && inst.neighbors(a).iter().any(|&s| inst.prefers(a, house_of[s]))
            })
            .collect();
        let scale = if self.objective.wants_happiness() { n as i64 + 1 } else { 1 };
        let happy_term = if self.objective.wants_happiness() { happy_cover as i64 } else { 0 };

        let mut calm = vec![false; n];
        let mut blocked = FixedBitSet::with_capacity(inst.n_houses());
        for c_mask in 0..1u64 << free.len() {
            let n_calm = c_mask.count_ones() as usize;
            let lb = scale * (k - n_calm) as i64 - if self.objective.wants_happiness() { n as i64 } else { 0 };
            if best.dominated(lb) {
                continue;
            }
            self.budget.tick()?;
            for (i, &s) in free.iter().enumerate() {
                calm[s] = c_mask >> i & 1 == 1;
            }
            let mut g = BipartiteGraph::new(self.outside.len(), inst.n_houses());
            for (li, &a) in self.outside.iter().enumerate() {
                blocked.clear();
                for &s in inst.neighbors(a) {
                    if calm[s] && !inst.prefers(s, house_of[s]) {
                        blocked.union_with(inst.preference_bits(s));
                    }
                }
                for h in (0..inst.n_houses()).filter(|&h| !used[h] && !blocked.contains(h)) {
                    let liked = inst.prefers(a, h);
                    let w = (threatened[a] && !liked) as i64;
                    let bonus = (self.objective.wants_happiness() && liked) as i64;
                    g.push(li, h, scale * w - bonus);
                }
            }
            let matching = min_cost_max_matching(&g);
            if matching.size() < self.outside.len() {
                continue;
            }
            let key = scale * (k - n_calm) as i64 + matching.total_cost - happy_term;
            best.offer(key, || {
                let mut houses = house_of.clone();
                for (li, h) in matching.pairs.iter().copied() {
                    houses[self.outside[li]] = h;
                }
                houses
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_leaves_favourite_unassigned() {
        let edges = vec![(0, 1), (0, 2), (0, 3)];
        let inst = Instance::new(4, 5, edges.clone(), vec![vec![0]; 4]).unwrap();
        let r = solve_vertex_cover_xp(&inst, Some(&[0]), &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 0);
        // with only four houses the favourite must go to someone
        let inst = Instance::new(4, 4, edges, vec![vec![0]; 4]).unwrap();
        let r = solve_vertex_cover_xp(&inst, Some(&[0]), &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 1);
    }

    #[test]
    fn edgeless_with_empty_cover() {
        let inst = Instance::new(3, 3, vec![], vec![vec![0]; 3]).unwrap();
        let r = solve_vertex_cover_xp(&inst, Some(&[]), &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 0);
        assert_eq!(r.guesses_explored, 1);
    }

    #[test]
    fn triangle_with_two_cover_agents() {
        let inst = Instance::new(3, 3, vec![(0, 1), (1, 2), (0, 2)], vec![vec![0]; 3]).unwrap();
        let r = solve_vertex_cover_xp(&inst, Some(&[0, 1]), &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 2);
    }

    #[test]
    fn rejects_non_cover() {
        let inst = Instance::new(3, 3, vec![(0, 1), (1, 2)], vec![vec![0]; 3]).unwrap();
        let err = solve_vertex_cover_xp(&inst, Some(&[0]), &SolverConfig::default()).unwrap_err();
        assert_eq!(err, Error::NotACover(1, 2));
    }
}
