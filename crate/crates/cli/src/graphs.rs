//! Named source graphs for the generators.
//!
//! `k3`, `k4`, `k5`, `prism`, `petersen`, `cycle:N`, `random-regular:N:D[:SEED]`
//! and `file:PATH`. An edge-list file holds the vertex count on its first
//! line and one `u v` pair per following line; `#` starts a comment.

use haan::Graph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

fn bad(desc: &str, why: &str) -> CliError {
    CliError::Usage(format!("graph `{desc}`: {why}"))
}

fn num(desc: &str, s: &str) -> Result<usize, CliError> {
    s.parse().map_err(|_| bad(desc, &format!("`{s}` is not a number")))
}

/// Resolves a graph name. `seed` applies to `random-regular` graphs that do not
/// carry their own.
pub fn named_graph(desc: &str, seed: Option<u64>) -> Result<Graph, CliError> {
    let parts: Vec<&str> = desc.split(':').collect();
    match parts.as_slice() {
        ["k3"] => Ok(Graph::complete(3)),
        ["k4"] => Ok(Graph::complete(4)),
        ["k5"] => Ok(Graph::complete(5)),
        ["prism"] => Ok(Graph::prism()),
        ["petersen"] => Ok(Graph::petersen()),
        ["cycle", n] => Ok(Graph::cycle(num(desc, n)?)?),
        ["random-regular", n, d, rest @ ..] => {
            let own = match rest {
                [] => None,
                [s] => Some(s.parse().map_err(|_| bad(desc, "bad seed"))?),
                _ => return Err(bad(desc, "too many fields")),
            };
            let seed = own.or(seed).ok_or_else(|| bad(desc, "random graphs need a seed (`:SEED` or --seed)"))?;
            random_regular(num(desc, n)?, num(desc, d)?, seed).ok_or_else(|| bad(desc, "no such regular graph"))
        }
        ["file", ..] => {
            let path = &desc["file:".len()..];
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.into(),
                source: e,
            })?;
            parse_edge_list(&text)
        }
        _ => Err(bad(desc, "unknown graph")),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, CliError> {
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let err = |line, msg: &str| CliError::Parse {
        line,
        msg: msg.into(),
    };
    let (i, first) = rows.next().ok_or_else(|| err(0, "empty edge list"))?;
    let n: usize = first.parse().map_err(|_| err(i, "first line must be the vertex count"))?;
    let mut edges = Vec::new();
    for (i, l) in rows {
        let ends: Vec<usize> = l
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| err(i, "expected `u v`")))
            .collect::<Result<_, _>>()?;
        match ends.as_slice() {
            [u, v] => edges.push((*u, *v)),
            _ => return Err(err(i, "expected `u v`")),
        }
    }
    Ok(Graph::new(n, edges)?)
}

/// A uniform-ish random `d`-regular simple graph by the configuration model
/// with restarts. `None` when `n·d` is odd or `d >= n` (except `d = 0`).
pub fn random_regular(n: usize, d: usize, seed: u64) -> Option<Graph> {
    if d == 0 {
        return Some(Graph::empty(n));
    }
    if d >= n || n * d % 2 == 1 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..10_000 {
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = stubs.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::new(n, edges).ok();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use haan::graphtools::is_regular;

    #[test]
    fn named_graphs_resolve() {
        assert_eq!(named_graph("k4", None).unwrap().edge_count(), 6);
        assert_eq!(named_graph("petersen", None).unwrap().edge_count(), 15);
        assert_eq!(named_graph("cycle:7", None).unwrap().edge_count(), 7);
        assert!(named_graph("k9", None).is_err());
        assert!(named_graph("random-regular:8:3", None).is_err());
    }

    #[test]
    fn random_regular_is_regular_and_seeded() {
        let a = named_graph("random-regular:10:3:5", None).unwrap();
        assert_eq!(is_regular(&a), Some(3));
        assert_eq!(a, named_graph("random-regular:10:3", Some(5)).unwrap());
        assert!(random_regular(5, 3, 0).is_none());
    }

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("# a path\n3\n0 1\n1 2\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(parse_edge_list("3\n0 3\n").is_err());
    }
}
