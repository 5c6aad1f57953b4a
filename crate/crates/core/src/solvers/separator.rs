//! Divide and conquer over balanced separators, on annotated instances.
//!
//! At each level the separator agents get explicit houses. Their neighbours
//! on either side then only care whether they themselves get a liked house,
//! which is expressed by marking them angry; calm separator agents forbid
//! their liked houses to outside neighbours through the feasibility sets.
//! After guessing which houses go to each side, the two sides are
//! independent sub-problems.
//!
//! The separator of a sub-problem depends only on its agent set, and the
//! agent sets of the recursion are fixed by the separators, so the whole
//! decomposition tree is computed once up front.

use fixedbitset::FixedBitSet;

use super::search::{run_tasks, Best, Budget};
use super::{empty_result, finish_annotated, SeparatorPolicy, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphtools::{find_balanced_separator, for_each_combination};
use crate::matching::{max_cardinality_matching, BipartiteGraph};
use crate::model::{Allocation, AnnotatedInstance};
use crate::Objective;

pub fn solve_separator(ann: &AnnotatedInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    let inst = ann.base();
    inst.check_houses_suffice()?;
    let workers = cfg.workers()?;
    let n = inst.n_agents();
    let m = inst.n_houses();
    if n == 0 {
        return Ok(empty_result("separator"));
    }
    let tree = Node::build(inst.graph(), (0..n).collect(), cfg.separator_size_policy)
        .expect("non-empty agent set");
    if tree.max_separator() > 63 {
        return Err(Error::TooLarge("separator with more than 63 agents".into()));
    }

    let dummies = inst.dummy_houses();
    let mut is_dummy = vec![false; m];
    for &h in &dummies {
        is_dummy[h] = true;
    }
    // dummies are interchangeable unless feasibility sets tell them apart
    let symmetric = (0..n).all(|a| {
        let f = ann.feasible_bits(a);
        dummies.iter().all(|&h| f.contains(h)) || dummies.iter().all(|&h| !f.contains(h))
    });
    let is_dummy: Vec<bool> = if symmetric { is_dummy } else { vec![false; m] };

    // top-level tasks: which n houses are used, then the first separator
    // agent's house
    let mut tasks: Vec<(FixedBitSet, Option<usize>)> = Vec::new();
    let mut overflow = false;
    for_each_combination(m, n, |subset| {
        if !dummy_prefix(subset, &is_dummy, (0..m).filter(|&h| is_dummy[h])) {
            return true;
        }
        let mut houses = FixedBitSet::with_capacity(m);
        subset.iter().for_each(|&h| houses.insert(h));
        match tree.sep.first() {
            None => tasks.push((houses, None)),
            Some(&s0) => {
                let mut seen_dummy = false;
                for &h in subset {
                    if !ann.feasible_bits(s0).contains(h) || (is_dummy[h] && std::mem::replace(&mut seen_dummy, true)) {
                        continue;
                    }
                    tasks.push((houses.clone(), Some(h)));
                }
            }
        }
        overflow = tasks.len() as u64 > cfg.guess_limit;
        !overflow
    });
    if overflow {
        return Err(Error::BudgetExceeded { limit: cfg.guess_limit });
    }

    let budget = cfg.budget();
    let ctx = Ctx {
        objective: cfg.objective,
        scale_n: n,
        graph: inst.graph(),
        budget: &budget,
        is_dummy: &is_dummy,
    };
    let best = run_tasks(tasks.len(), workers, |t, bound| {
        let (houses, first) = &tasks[t];
        let root = Sub {
            prefs: (0..n)
                .map(|a| {
                    let mut p = inst.preference_bits(a).clone();
                    p.intersect_with(houses);
                    p
                })
                .collect(),
            feasible: (0..n)
                .map(|a| {
                    let mut f = ann.feasible_bits(a).clone();
                    f.intersect_with(houses);
                    f
                })
                .collect(),
            angry: (0..n).map(|a| ann.is_angry(a)).collect(),
            houses: houses.clone(),
        };
        ctx.solve_node(&tree, &root, *first, bound)
    })?;
    let (_, pairs) = best.ok_or(Error::NoFeasibleAllocation)?;
    let mut houses = vec![usize::MAX; n];
    for (a, h) in pairs {
        houses[a] = h;
    }
    Ok(finish_annotated(ann, Allocation::new(houses), "separator", budget.explored()))
}

/// True when the dummies among `chosen` are the first ones of `pool`.
fn dummy_prefix(chosen: &[usize], is_dummy: &[bool], pool: impl Iterator<Item = usize>) -> bool {
    let picked: Vec<usize> = chosen.iter().copied().filter(|&h| is_dummy[h]).collect();
    pool.take(picked.len()).eq(picked.iter().copied())
}

struct Node {
    sep: Vec<usize>,
    parts: [Vec<usize>; 2],
    children: [Option<Box<Node>>; 2],
}

impl Node {
    fn build(graph: &Graph, agents: Vec<usize>, policy: SeparatorPolicy) -> Option<Node> {
        if agents.is_empty() {
            return None;
        }
        let local = graph.induced(&agents);
        let dec = match policy {
            SeparatorPolicy::Max(f) => find_balanced_separator(&local, Some(f)),
            SeparatorPolicy::Auto => None,
        }
        .or_else(|| find_balanced_separator(&local, None))
        .expect("the full vertex set is always a balanced separator");
        let global = |v: &[usize]| v.iter().map(|&i| agents[i]).collect::<Vec<_>>();
        let parts = [global(&dec.part1), global(&dec.part2)];
        let children = [
            Node::build(graph, parts[0].clone(), policy).map(Box::new),
            Node::build(graph, parts[1].clone(), policy).map(Box::new),
        ];
        Some(Node {
            sep: global(&dec.separator),
            parts,
            children,
        })
    }

    fn max_separator(&self) -> usize {
        self.children
            .iter()
            .flatten()
            .map(|c| c.max_separator())
            .max()
            .unwrap_or(0)
            .max(self.sep.len())
    }
}

/// Per-agent data of a sub-problem, indexed by global agent id; entries of
/// agents outside the sub-problem are ignored.
struct Sub {
    prefs: Vec<FixedBitSet>,
    feasible: Vec<FixedBitSet>,
    angry: Vec<bool>,
    houses: FixedBitSet,
}

type Pairs = Vec<(usize, usize)>;

struct Ctx<'a> {
    objective: Objective,
    /// Agent count of the whole instance, which scales the objective key.
    scale_n: usize,
    graph: &'a Graph,
    budget: &'a Budget,
    is_dummy: &'a [bool],
}

impl Ctx<'_> {
    fn key(&self, envy: usize, happy: usize) -> i64 {
        self.objective.key(self.scale_n, envy, happy)
    }

    /// Most a sub-problem on `agents` agents can lower the key below its
    /// envy term.
    fn happy_slack(&self, agents: usize) -> i64 {
        if self.objective.wants_happiness() {
            agents as i64
        } else {
            0
        }
    }

    fn solve_node(&self, node: &Node, sub: &Sub, first: Option<usize>, bound: i64) -> Result<Option<(i64, Pairs)>> {
        let mut best = Best::below(bound);
        let mut phi = vec![usize::MAX; node.sep.len()];
        let mut used = FixedBitSet::with_capacity(sub.houses.len());
        self.guess_separator(node, sub, first, &mut phi, &mut used, 0, &mut best)?;
        Ok(best.into_option())
    }

    #[allow(clippy::too_many_arguments)]
    fn guess_separator(
        &self,
        node: &Node,
        sub: &Sub,
        first: Option<usize>,
        phi: &mut [usize],
        used: &mut FixedBitSet,
        i: usize,
        best: &mut Best<Pairs>,
    ) -> Result<()> {
        if i == phi.len() {
            return self.after_separator(node, sub, phi, used, best);
        }
        self.budget.check_cancel()?;
        let s = node.sep[i];
        let mut dummy_seen = false;
        let candidates: Vec<usize> = match (i, first) {
            (0, Some(h)) => vec![h],
            _ => sub.houses.ones().collect(),
        };
        for h in candidates {
            if used.contains(h) || !sub.feasible[s].contains(h) {
                continue;
            }
            if self.is_dummy[h] {
                // only the smallest unused dummy
                if dummy_seen {
                    continue;
                }
                dummy_seen = true;
            }
            phi[i] = h;
            used.insert(h);
            let r = self.guess_separator(node, sub, first, phi, used, i + 1, best);
            used.set(h, false);
            r?;
        }
        Ok(())
    }

    fn after_separator(&self, node: &Node, sub: &Sub, phi: &[usize], used: &FixedBitSet, best: &mut Best<Pairs>) -> Result<()> {
        let g = self.graph;
        let n_global = sub.angry.len();
        let mut in_sep = vec![false; n_global];
        let mut house_of = vec![usize::MAX; n_global];
        for (i, &s) in node.sep.iter().enumerate() {
            in_sep[s] = true;
            house_of[s] = phi[i];
        }
        let mut happy = 0;
        let mut envious = 0;
        let mut undecided = Vec::new();
        for &s in &node.sep {
            let h = house_of[s];
            if sub.prefs[s].contains(h) {
                happy += 1;
            } else if sub.angry[s]
                || g.neighbors(s).iter().any(|&t| in_sep[t] && sub.prefs[s].contains(house_of[t]))
            {
                envious += 1;
            } else {
                undecided.push(s);
            }
        }
        let angry_next: Vec<bool> = (0..n_global)
            .map(|a| {
                sub.angry[a]
                    || (!in_sep[a]
                        && g.neighbors(a)
                            .iter()
                            .any(|&s| in_sep[s] && sub.prefs[a].contains(house_of[s])))
            })
            .collect();

        let rest: Vec<usize> = sub.houses.ones().filter(|&h| !used.contains(h)).collect();
        let rest_dummies: Vec<usize> = rest.iter().copied().filter(|&h| self.is_dummy[h]).collect();
        let sizes = [node.parts[0].len(), node.parts[1].len()];
        let slack = self.happy_slack(sizes[0]) + self.happy_slack(sizes[1]);
        let mut result = Ok(());
        let mut calm = vec![false; n_global];
        for_each_combination(rest.len(), sizes[0], |idx| {
            let h1: Vec<usize> = idx.iter().map(|&i| rest[i]).collect();
            if !dummy_prefix(&h1, self.is_dummy, rest_dummies.iter().copied()) {
                return true;
            }
            let mut side_houses = [FixedBitSet::with_capacity(sub.houses.len()), FixedBitSet::with_capacity(sub.houses.len())];
            for &h in &rest {
                side_houses[1].insert(h);
            }
            for &h in &h1 {
                side_houses[0].insert(h);
                side_houses[1].set(h, false);
            }
            for k_mask in 0..1u64 << undecided.len() {
                let n_calm = k_mask.count_ones() as usize;
                let base = self.key(envious + undecided.len() - n_calm, happy);
                if best.dominated(base - slack) {
                    continue;
                }
                if let Err(e) = self.budget.tick() {
                    result = Err(e);
                    return false;
                }
                for (i, &s) in undecided.iter().enumerate() {
                    calm[s] = k_mask >> i & 1 == 1;
                }
                match self.solve_sides(node, sub, &side_houses, &angry_next, &calm, base, slack, best) {
                    Ok(Some((key, pairs))) => {
                        best.offer(key, || {
                            let mut all = pairs;
                            all.extend(node.sep.iter().map(|&s| (s, house_of[s])));
                            all
                        });
                    }
                    Ok(None) => {}
                    Err(e) => {
                        result = Err(e);
                        return false;
                    }
                }
            }
            true
        });
        result
    }

    /// Builds and solves both sides for one (H1, K) guess; `None` when either
    /// side is infeasible or cannot beat the incumbent.
    #[allow(clippy::too_many_arguments)]
    fn solve_sides(
        &self,
        node: &Node,
        sub: &Sub,
        side_houses: &[FixedBitSet; 2],
        angry_next: &[bool],
        calm: &[bool],
        base: i64,
        slack: i64,
        best: &Best<Pairs>,
    ) -> Result<Option<(i64, Pairs)>> {
        let mut subs = Vec::with_capacity(2);
        for side in 0..2 {
            let houses = &side_houses[side];
            let mut child = Sub {
                prefs: sub.prefs.clone(),
                feasible: sub.feasible.clone(),
                angry: angry_next.to_vec(),
                houses: houses.clone(),
            };
            for &a in &node.parts[side] {
                child.prefs[a].intersect_with(houses);
                child.feasible[a].intersect_with(houses);
                for &s in self.graph.neighbors(a) {
                    if calm[s] && node.sep.contains(&s) {
                        child.feasible[a].difference_with(&sub.prefs[s]);
                    }
                }
            }
            if !has_perfect_matching(&node.parts[side], &child.feasible, houses.len()) {
                return Ok(None);
            }
            subs.push(child);
        }
        let mut total = base;
        let mut pairs = Vec::new();
        let mut remaining_slack = slack;
        for side in 0..2 {
            remaining_slack -= self.happy_slack(node.parts[side].len());
            let Some(child) = &node.children[side] else {
                continue;
            };
            // the child must beat the incumbent given the rest of the key
            let child_bound = best.key.saturating_sub(total - remaining_slack);
            let Some((k, p)) = self.solve_node(child, &subs[side], None, child_bound)? else {
                return Ok(None);
            };
            total += k;
            pairs.extend(p);
        }
        Ok(Some((total, pairs)))
    }
}

fn has_perfect_matching(agents: &[usize], feasible: &[FixedBitSet], m: usize) -> bool {
    if agents.iter().any(|&a| feasible[a].is_clear()) {
        return false;
    }
    let mut g = BipartiteGraph::new(agents.len(), m);
    for (i, &a) in agents.iter().enumerate() {
        for h in feasible[a].ones() {
            g.push(i, h, 0);
        }
    }
    max_cardinality_matching(&g).size() == agents.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instance;

    #[test]
    fn empty_agent_set() {
        let ann = AnnotatedInstance::plain(Instance::new(0, 2, vec![], vec![]).unwrap());
        let r = solve_separator(&ann, &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 0);
    }

    #[test]
    fn angry_agent_without_liked_house() {
        let base = Instance::new(1, 2, vec![], vec![vec![0]]).unwrap();
        let ann = AnnotatedInstance::new(base, vec![vec![1]], &[0]).unwrap();
        let r = solve_separator(&ann, &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 1);
        assert_eq!(r.allocation.houses(), &[1]);
    }

    #[test]
    fn plain_triangle() {
        let inst = Instance::new(3, 3, vec![(0, 1), (1, 2), (0, 2)], vec![vec![0]; 3]).unwrap();
        let r = solve_separator(&AnnotatedInstance::plain(inst), &SolverConfig::default()).unwrap();
        assert_eq!(r.min_envy, 2);
    }

    #[test]
    fn over_constrained_feasibility() {
        let base = Instance::new(2, 2, vec![], vec![vec![0], vec![0]]).unwrap();
        let ann = AnnotatedInstance::new(base, vec![vec![0], vec![0]], &[]).unwrap();
        assert_eq!(
            solve_separator(&ann, &SolverConfig::default()).unwrap_err(),
            Error::NoFeasibleAllocation
        );
    }

    #[test]
    fn explicit_policy_falls_back() {
        let inst = Instance::new(4, 4, Graph::complete(4).edges().to_vec(), vec![vec![0, 1]; 4]).unwrap();
        let ann = AnnotatedInstance::plain(inst);
        let cfg = SolverConfig {
            separator_size_policy: SeparatorPolicy::Max(1),
            ..SolverConfig::default()
        };
        let r = solve_separator(&ann, &cfg).unwrap();
        assert_eq!(r.min_envy, 2);
    }
}
