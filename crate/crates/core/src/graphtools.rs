//! Graph subroutines for the solvers and generators: balanced separators,
//! minimum vertex covers, regularity and bipartiteness checks.

use crate::graph::Graph;

/// `S`, `A1`, `A2` partition the vertices, no edge joins `A1` and `A2`, and
/// both parts have at most `floor(2n/3)` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorDecomposition {
    pub separator: Vec<usize>,
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
}

/// Largest part size a balanced separator may leave on `n` vertices.
pub fn balance_bound(n: usize) -> usize {
    2 * n / 3
}

impl SeparatorDecomposition {
    /// Re-checks every invariant against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        let mut side = vec![0u8; n];
        for (tag, set) in [(1u8, &self.separator), (2, &self.part1), (3, &self.part2)] {
            for &v in set.iter() {
                if v >= n || side[v] != 0 {
                    return false;
                }
                side[v] = tag;
            }
        }
        let bound = balance_bound(n);
        side.iter().all(|&s| s != 0)
            && self.part1.len() <= bound
            && self.part2.len() <= bound
            && g.edges().iter().all(|&(u, v)| {
                !matches!((side[u], side[v]), (2, 3) | (3, 2))
            })
    }
}

/// Connected components of `g` minus the `removed` vertices, each sorted,
/// ordered by their smallest vertex.
pub fn components(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbors(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Splits whole components into two parts of size at most `bound`, as evenly
/// as possible. Returns `(part1, part2)` with `|part1| >= |part2|`.
fn group_components(comps: &[Vec<usize>], bound: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let total: usize = comps.iter().map(Vec::len).sum();
    if comps.iter().any(|c| c.len() > bound) {
        return None;
    }
    // reach[i][x]: some subset of comps[i..] has total size x
    let c = comps.len();
    let mut reach = vec![vec![false; total + 1]; c + 1];
    reach[c][0] = true;
    for i in (0..c).rev() {
        let sz = comps[i].len();
        for x in 0..=total {
            reach[i][x] = reach[i + 1][x] || (x >= sz && reach[i + 1][x - sz]);
        }
    }
    let small = (0..=total / 2)
        .rev()
        .find(|&x| reach[0][x] && total - x <= bound)?;
    let (mut p1, mut p2) = (Vec::new(), Vec::new());
    let mut x = small;
    for (i, comp) in comps.iter().enumerate() {
        if reach[i + 1][x] {
            p1.extend_from_slice(comp);
        } else {
            x -= comp.len();
            p2.extend_from_slice(comp);
        }
    }
    p1.sort_unstable();
    p2.sort_unstable();
    Some((p1, p2))
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order; stops
/// early when `f` returns `false`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest balanced separator with at most `max_size` vertices (`None` means
/// no cap). Among separators of minimum size, the one leaving the smaller
/// largest part wins, then the lexicographically first.
pub fn find_balanced_separator(g: &Graph, max_size: Option<usize>) -> Option<SeparatorDecomposition> {
    let n = g.n();
    let bound = balance_bound(n);
    let cap = max_size.unwrap_or(n).min(n);
    let mut removed = vec![false; n];
    for size in 0..=cap {
        let mut best: Option<(usize, SeparatorDecomposition)> = None;
        // a split can never be better than ceil((n - size) / 2)
        let floor_quality = (n - size).div_ceil(2);
        for_each_combination(n, size, |sep| {
            for &v in sep {
                removed[v] = true;
            }
            let comps = components(g, &removed);
            for &v in sep {
                removed[v] = false;
            }
            if let Some((p1, p2)) = group_components(&comps, bound) {
                let quality = p1.len();
                if best.as_ref().is_none_or(|(q, _)| quality < *q) {
                    best = Some((
                        quality,
                        SeparatorDecomposition {
                            separator: sep.to_vec(),
                            part1: p1,
                            part2: p2,
                        },
                    ));
                }
            }
            best.as_ref().is_none_or(|(q, _)| *q > floor_quality)
        });
        if let Some((_, dec)) = best {
            return Some(dec);
        }
    }
    None
}

fn cover_exists(g: &Graph, state: &mut [i8], budget: usize) -> bool {
    // state: 1 = in cover, -1 = excluded, 0 = undecided
    let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| state[u] != 1 && state[v] != 1)
    else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for w in [u, v] {
        if state[w] == 0 {
            state[w] = 1;
            let ok = cover_exists(g, state, budget - 1);
            state[w] = 0;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Minimum vertex cover if its size is at most `budget`; the
/// lexicographically first among minimum covers.
pub fn find_min_vertex_cover(g: &Graph, budget: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut state = vec![0i8; n];
    let tau = (0..=budget.min(n)).find(|&k| cover_exists(g, &mut state, k))?;
    let mut left = tau;
    for v in 0..n {
        if left > 0 {
            state[v] = 1;
            let used: usize = state.iter().filter(|&&s| s == 1).count();
            if cover_exists(g, &mut state, tau - used) {
                left -= 1;
                continue;
            }
        }
        state[v] = -1;
    }
    let cover: Vec<usize> = (0..n).filter(|&v| state[v] == 1).collect();
    debug_assert_eq!(cover.len(), tau);
    Some(cover)
}

/// True when every edge has an endpoint in `set`; otherwise the first
/// uncovered edge.
pub fn check_vertex_cover(g: &Graph, set: &[usize]) -> Result<(), (usize, usize)> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v < g.n() {
            inside[v] = true;
        }
    }
    match g.edges().iter().find(|&&(u, v)| !inside[u] && !inside[v]) {
        Some(&e) => Err(e),
        None => Ok(()),
    }
}

/// Common degree of a regular graph. The empty graph is 0-regular.
pub fn is_regular(g: &Graph) -> Option<usize> {
    let d = if g.n() == 0 { 0 } else { g.degree(0) };
    (0..g.n()).all(|v| g.degree(v) == d).then_some(d)
}

/// Two-colouring with the lowest vertex of each component on the first side.
pub fn is_bipartite(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let mut colour = vec![u8::MAX; n];
    for start in 0..n {
        if colour[start] != u8::MAX {
            continue;
        }
        colour[start] = 0;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if colour[w] == u8::MAX {
                    colour[w] = 1 - colour[u];
                    stack.push(w);
                } else if colour[w] == colour[u] {
                    return None;
                }
            }
        }
    }
    let left = (0..n).filter(|&v| colour[v] == 0).collect();
    let right = (0..n).filter(|&v| colour[v] == 1).collect();
    Some((left, right))
}

/// The lexicographically first `k`-clique, by brute force.
pub fn find_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_combination(g.n(), k, |c| {
        if g.is_clique(c) {
            found = Some(c.to_vec());
        }
        found.is_none()
    });
    found
}

/// A set `S` with `|S| <= k` whose removal leaves two equal halves with no
/// edge between them, by brute force. Returns `(S, X, Y)`.
pub fn find_half_separator(g: &Graph, k: usize) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let mut removed = vec![false; n];
    for size in (0..=k.min(n)).filter(|s| (n - s) % 2 == 0) {
        let half = (n - size) / 2;
        let mut found = None;
        for_each_combination(n, size, |sep| {
            for &v in sep {
                removed[v] = true;
            }
            let comps = components(g, &removed);
            for &v in sep {
                removed[v] = false;
            }
            // subset of components summing to exactly `half`
            let mut reach: Vec<Option<usize>> = vec![None; half + 1];
            let mut sums = vec![false; half + 1];
            sums[0] = true;
            for (i, c) in comps.iter().enumerate() {
                for x in (c.len()..=half).rev() {
                    if !sums[x] && sums[x - c.len()] {
                        sums[x] = true;
                        reach[x] = Some(i);
                    }
                }
            }
            if !sums[half] {
                return true;
            }
            let mut in_x = vec![false; comps.len()];
            let mut x = half;
            while x > 0 {
                let i = reach[x].unwrap();
                in_x[i] = true;
                x -= comps[i].len();
            }
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (i, c) in comps.iter().enumerate() {
                if in_x[i] { xs.extend_from_slice(c) } else { ys.extend_from_slice(c) }
            }
            xs.sort_unstable();
            ys.sort_unstable();
            found = Some((sep.to_vec(), xs, ys));
            false
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// One representative per isomorphism class of graphs on `n` vertices, by
/// brute force over all labelled graphs and permutations. Meant for `n <= 6`.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    let code = |mask: u32, p: &[usize]| -> u32 {
        pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                1u32 << pairs.iter().position(|&q| q == (a, b)).unwrap()
            })
            .sum()
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0..1u32 << pairs.len() {
        let canon = perms.iter().map(|p| code(mask, p)).min().unwrap();
        if seen.insert(canon) {
            let edges = pairs.iter().enumerate().filter(|&(i, _)| canon >> i & 1 == 1).map(|(_, &e)| e);
            out.push(Graph::new(n, edges).expect("pairs are simple"));
        }
    }
    out
}

fn permutations(cur: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permutations(cur, i + 1, out);
        cur.swap(i, j);
    }
}
