#![allow(dead_code)]

use haan::{evaluate, Allocation, Instance};
use rand::Rng;


/// Every injective assignment of `m` houses to `n` agents, in lexicographic
/// order.
pub fn all_allocations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for h in 0..m {
            if !used[h] {
                used[h] = true;
                cur.push(h);
                rec(n, m, cur, used, out);
                cur.pop();
                used[h] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Minimum envy, and the largest happiness among minimum-envy allocations.
pub fn naive_optimum(inst: &Instance) -> (usize, usize) {
    all_allocations(inst.n_agents(), inst.n_houses())
        .into_iter()
        .map(|h| {
            let r = evaluate(inst, &Allocation::new(h)).unwrap();
            (r.n_envious, usize::MAX - r.n_happy)
        })
        .min()
        .map(|(e, h)| (e, usize::MAX - h))
        .unwrap()
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize, extra_houses: usize, max_d: usize) -> Instance {
    let n = rng.random_range(0..=max_n);
    let m = n + rng.random_range(0..=extra_houses);
    let mut edges = Vec::new();
    let p = rng.random_range(0.0..1.0);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let prefs = (0..n)
        .map(|_| {
            let d = rng.random_range(0..=max_d.min(m));
            let mut houses: Vec<usize> = (0..m).collect();
            for i in 0..d {
                let j = rng.random_range(i..m);
                houses.swap(i, j);
            }
            houses.truncate(d);
            houses
        })
        .collect();
    Instance::new(n, m, edges, prefs).unwrap()
}

/// Instances with at most `max_n` agents, `n..=n + extra_houses` houses and
/// preference sets of size at most `max_d`.
pub fn instances(max_n: usize, extra_houses: usize, max_d: usize) -> impl proptest::strategy::Strategy<Value = Instance> {
    use proptest::prelude::*;
    (0..=max_n, 0..=extra_houses).prop_flat_map(move |(n, extra)| {
        let m = n + extra;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges = prop::sample::subsequence(pairs.clone(), 0..=pairs.len());
        let prefs = prop::collection::vec(
            prop::sample::subsequence((0..m).collect::<Vec<_>>(), 0..=max_d.min(m)),
            n,
        );
        (edges, prefs).prop_map(move |(e, p)| Instance::new(n, m, e, p).unwrap())
    })
}
