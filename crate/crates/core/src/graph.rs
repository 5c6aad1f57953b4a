//! Simple undirected graphs over dense `0..n` vertex indices.
//!
//! The same type backs agent graphs of instances and the source graphs fed to
//! the reduction generators.

use crate::error::{Error, Result};

/// A simple undirected graph. Edges are stored normalized (`u < v`) and
/// sorted, adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges: norm, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Complete bipartite graph with left part `0..a` and right part `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    /// Triangular prism: two triangles joined by a perfect matching.
    pub fn prism() -> Self {
        Graph::new(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        )
        .expect("prism is simple")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Graph::new(10, outer.chain(spokes).chain(inner)).expect("petersen is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Subgraph induced by `vertices`, relabelled so that `vertices[i]`
    /// becomes vertex `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if pos[w] != usize::MAX && pos[w] > i {
                    edges.push((i, pos[w]));
                }
            }
        }
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Copy of the graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        Graph::new(self.n + extra, self.edges.iter().copied()).expect("padding keeps graph simple")
    }

    /// Copy of the graph without edge number `index`.
    pub fn without_edge(&self, index: usize) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, &e)| e);
        Graph::new(self.n, edges).expect("edge deletion keeps graph simple")
    }

    /// True when every pair of distinct vertices in `set` is adjacent.
    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}
