//! Bipartite matching: maximum cardinality (Hopcroft-Karp) and minimum-cost
//! maximum matching (successive shortest augmenting paths with potentials).
//!
//! Inadmissible pairs are simply absent edges; costs are finite integers.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph {
            n_left,
            n_right,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(left, right, cost)` triples, rejecting
    /// out-of-range endpoints and duplicate pairs.
    pub fn with_edges(n_left: usize, n_right: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(l, r, _) in &edges {
            if l >= n_left || r >= n_right {
                return Err(Error::InvalidGraph(format!(
                    "bipartite edge ({l}, {r}) out of range for {n_left}x{n_right}"
                )));
            }
            pairs.push((l, r));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate bipartite edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            edges,
        })
    }

    /// Appends an edge without duplicate checking. Callers own uniqueness.
    pub(crate) fn push(&mut self, left: usize, right: usize, cost: i64) {
        debug_assert!(left < self.n_left && right < self.n_right);
        self.edges.push((left, right, cost));
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.n_left];
        for &(l, r, c) in &self.edges {
            adj[l].push((r, c));
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Matched `(left, right)` pairs, sorted by left vertex.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: i64,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// `result[l]` is the right vertex matched to `l`, if any.
    pub fn left_mates(&self, n_left: usize) -> Vec<Option<usize>> {
        let mut mates = vec![None; n_left];
        for &(l, r) in &self.pairs {
            mates[l] = Some(r);
        }
        mates
    }
}

const FREE: usize = usize::MAX;

/// Maximum-cardinality matching via Hopcroft-Karp.
pub fn max_cardinality_matching(g: &BipartiteGraph) -> Matching {
    let adj = g.adjacency();
    let mut mate_l = vec![FREE; g.n_left];
    let mut mate_r = vec![FREE; g.n_right];
    let mut dist = vec![0usize; g.n_left];
    let mut cost_of = vec![0i64; g.n_left];

    loop {
        // layer the free left vertices
        let mut queue = VecDeque::new();
        for l in 0..g.n_left {
            if mate_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &(r, _) in &adj[l] {
                match mate_r[r] {
                    FREE => found = true,
                    l2 if dist[l2] == usize::MAX => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut iter = vec![0usize; g.n_left];
        for l in 0..g.n_left {
            if mate_l[l] == FREE {
                augment(l, &adj, &mut mate_l, &mut mate_r, &mut dist, &mut iter, &mut cost_of);
            }
        }
    }

    let pairs: Vec<_> = (0..g.n_left)
        .filter(|&l| mate_l[l] != FREE)
        .map(|l| (l, mate_l[l]))
        .collect();
    let total_cost = pairs.iter().map(|&(l, _)| cost_of[l]).sum();
    Matching { pairs, total_cost }
}

fn augment(
    l: usize,
    adj: &[Vec<(usize, i64)>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
    cost_of: &mut [i64],
) -> bool {
    while iter[l] < adj[l].len() {
        let (r, c) = adj[l][iter[l]];
        iter[l] += 1;
        let next = mate_r[r];
        let ok = next == FREE
            || (dist[next] == dist[l] + 1 && augment(next, adj, mate_l, mate_r, dist, iter, cost_of));
        if ok {
            mate_l[l] = r;
            mate_r[r] = l;
            cost_of[l] = c;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

struct Arc {
    to: usize,
    cap: i32,
    cost: i64,
}

/// Among all maximum-cardinality matchings, one of minimum total cost.
pub fn min_cost_max_matching(g: &BipartiteGraph) -> Matching {
    // nodes: source, lefts, rights, sink
    let source = 0;
    let left = |l: usize| 1 + l;
    let right = |r: usize| 1 + g.n_left + r;
    let sink = 1 + g.n_left + g.n_right;
    let n_nodes = sink + 1;

    let mut arcs: Vec<Arc> = Vec::with_capacity(2 * (g.edges.len() + g.n_left + g.n_right));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    let mut link = |arcs: &mut Vec<Arc>, u: usize, v: usize, cost: i64| {
        out[u].push(arcs.len());
        arcs.push(Arc { to: v, cap: 1, cost });
        out[v].push(arcs.len());
        arcs.push(Arc { to: u, cap: 0, cost: -cost });
    };
    for l in 0..g.n_left {
        link(&mut arcs, source, left(l), 0);
    }
    let first_edge_arc = arcs.len();
    for &(l, r, c) in &g.edges {
        link(&mut arcs, left(l), right(r), c);
    }
    for r in 0..g.n_right {
        link(&mut arcs, right(r), sink, 0);
    }

    // The initial residual network is a DAG, so exact potentials come from
    // one relaxation pass in topological order.
    const UNREACHED: i64 = i64::MAX / 4;
    let mut pot = vec![UNREACHED; n_nodes];
    pot[source] = 0;
    for l in 0..g.n_left {
        pot[left(l)] = 0;
    }
    for &(l, r, c) in &g.edges {
        let _ = l;
        pot[right(r)] = pot[right(r)].min(c);
    }
    for r in 0..g.n_right {
        pot[sink] = pot[sink].min(pot[right(r)]);
    }
    for p in pot.iter_mut() {
        if *p == UNREACHED {
            *p = 0;
        }
    }

    let mut dist = vec![UNREACHED; n_nodes];
    let mut parent = vec![usize::MAX; n_nodes];
    loop {
        dist.fill(UNREACHED);
        parent.fill(usize::MAX);
        dist[source] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0i64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &ai in &out[u] {
                let arc = &arcs[ai];
                if arc.cap == 0 {
                    continue;
                }
                let reduced = arc.cost + pot[u] - pot[arc.to];
                debug_assert!(reduced >= 0, "negative reduced cost {reduced}");
                let nd = d + reduced;
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    parent[arc.to] = ai;
                    heap.push(Reverse((nd, arc.to)));
                }
            }
        }
        if dist[sink] == UNREACHED {
            break;
        }
        for v in 0..n_nodes {
            if dist[v] < UNREACHED {
                pot[v] += dist[v];
            }
        }
        let mut v = sink;
        while v != source {
            let ai = parent[v];
            arcs[ai].cap -= 1;
            arcs[ai ^ 1].cap += 1;
            v = arcs[ai ^ 1].to;
        }
    }

    let mut pairs = Vec::new();
    let mut total_cost = 0;
    for (i, &(l, r, c)) in g.edges.iter().enumerate() {
        if arcs[first_edge_arc + 2 * i].cap == 0 {
            pairs.push((l, r));
            total_cost += c;
        }
    }
    pairs.sort_unstable();
    Matching { pairs, total_cost }
}
