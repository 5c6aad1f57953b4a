//! Generators for the hardness reductions, each with a witness constructor
//! for its forward direction.
//!
//! Every generated instance comes with a target envy and provenance maps from
//! source-graph objects to agent and house indices, so tests can navigate the
//! construction without re-deriving it. Solvers never look at either.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphtools::is_regular;
use crate::model::{Allocation, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// CLIQUE on regular graphs → complete bipartite agent graph, d ≤ 2.
    CliqueBipD2,
    /// Half vertex separator on 3-regular graphs → identical preferences.
    HalfSep3Reg,
    /// CLIQUE → complete bipartite agent graph with a small vertex cover.
    CliqueVcBip,
    /// CLIQUE → split agent graph with a small vertex cover.
    CliqueVcSplit,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::CliqueBipD2,
        Family::HalfSep3Reg,
        Family::CliqueVcBip,
        Family::CliqueVcSplit,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::CliqueBipD2 => "clique-bip-d2",
            Family::HalfSep3Reg => "halfsep-3reg",
            Family::CliqueVcBip => "clique-vc-bip",
            Family::CliqueVcSplit => "clique-vc-split",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| Error::InvalidInstance(format!("unknown family `{s}`")))
    }
}

/// What a generated agent stands for. Copy indices `j` are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentRole {
    Vertex { v: usize, j: usize },
    Edge { e: usize, j: usize },
}

/// What a generated house stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HouseRole {
    Vertex(usize),
    Edge { e: usize, j: usize },
    /// One of the houses every agent likes.
    Shared,
    Dummy,
}

impl fmt::Display for AgentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentRole::Vertex { v, j } => write!(f, "v{v}.{j}"),
            AgentRole::Edge { e, j } => write!(f, "e{e}.{j}"),
        }
    }
}

impl FromStr for AgentRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("bad agent role `{s}`"));
        let (kind, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let (a, b) = rest.split_once('.').ok_or_else(bad)?;
        let a: usize = a.parse().map_err(|_| bad())?;
        let j: usize = b.parse().map_err(|_| bad())?;
        match kind {
            "v" => Ok(AgentRole::Vertex { v: a, j }),
            "e" => Ok(AgentRole::Edge { e: a, j }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for HouseRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HouseRole::Vertex(v) => write!(f, "v{v}"),
            HouseRole::Edge { e, j } => write!(f, "e{e}.{j}"),
            HouseRole::Shared => f.write_str("shared"),
            HouseRole::Dummy => f.write_str("dummy"),
        }
    }
}

impl FromStr for HouseRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInstance(format!("bad house role `{s}`"));
        match s {
            "shared" => return Ok(HouseRole::Shared),
            "dummy" => return Ok(HouseRole::Dummy),
            _ => {}
        }
        if let Some(v) = s.strip_prefix('v') {
            return v.parse().map(HouseRole::Vertex).map_err(|_| bad());
        }
        let rest = s.strip_prefix('e').ok_or_else(bad)?;
        let (e, j) = rest.split_once('.').ok_or_else(bad)?;
        Ok(HouseRole::Edge {
            e: e.parse().map_err(|_| bad())?,
            j: j.parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub family: Family,
    /// The source graph, after any padding with isolated vertices.
    pub source: Graph,
    pub k: usize,
    /// `t_pad` for [`Family::CliqueVcBip`], `t` for [`Family::CliqueVcSplit`].
    pub padding: Option<usize>,
    pub agent_roles: Vec<AgentRole>,
    pub house_roles: Vec<HouseRole>,
    /// Set when `k` exceeds the regularity degree, where the target carries
    /// no hardness meaning.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub instance: Instance,
    pub target_envy: usize,
    pub provenance: Provenance,
}

impl ReducedInstance {
    /// Index of the agent with `role`.
    pub fn agent(&self, role: AgentRole) -> Option<usize> {
        self.provenance.agent_roles.iter().position(|&r| r == role)
    }

    /// Index of the house with `role` (not meaningful for dummies).
    pub fn house(&self, role: HouseRole) -> Option<usize> {
        self.provenance.house_roles.iter().position(|&r| r == role)
    }

    fn expect_family(&self, family: Family, op: &str) -> Result<()> {
        if self.provenance.family == family {
            Ok(())
        } else {
            Err(Error::InvalidInstance(format!(
                "{op} needs a {family} instance, got {}",
                self.provenance.family
            )))
        }
    }

    fn expect_families(&self, families: &[Family], op: &str) -> Result<()> {
        if families.contains(&self.provenance.family) {
            Ok(())
        } else {
            Err(Error::InvalidInstance(format!(
                "{op} does not apply to {} instances",
                self.provenance.family
            )))
        }
    }
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

fn dummies(count: usize) -> impl Iterator<Item = HouseRole> {
    std::iter::repeat_n(HouseRole::Dummy, count)
}

/// CLIQUE on a δ-regular graph: `δ` agents per vertex liking that vertex's
/// house, one agent per edge liking both endpoint houses, all vertex agents
/// adjacent to all edge agents. Target `kδ − C(k,2)`.
pub fn gen_clique_bipartite_d2(g: &Graph, k: usize) -> Result<ReducedInstance> {
    let delta = is_regular(g).ok_or(Error::NotRegular)?;
    let (n_v, n_e) = (g.n(), g.edge_count());
    if k == 0 || k > n_v {
        return Err(Error::BadK(format!("k = {k} must lie in 1..={n_v}")));
    }
    if k * delta < choose2(k) {
        return Err(Error::BadK(format!(
            "target kδ − C(k,2) is negative for k = {k}, δ = {delta}"
        )));
    }
    let n_agents = delta * n_v + n_e;
    if n_agents < k {
        return Err(Error::BadK(format!("k = {k} exceeds the {n_agents} agents")));
    }
    let mut roles = Vec::with_capacity(n_agents);
    let mut prefs = Vec::with_capacity(n_agents);
    for v in 0..n_v {
        for j in 0..delta {
            roles.push(AgentRole::Vertex { v, j });
            prefs.push(vec![v]);
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        roles.push(AgentRole::Edge { e, j: 0 });
        prefs.push(vec![u, v]);
    }
    let house_roles: Vec<HouseRole> = (0..n_v)
        .map(HouseRole::Vertex)
        .chain(dummies(n_agents - k))
        .collect();
    let vertex_side = delta * n_v;
    let edges = (0..vertex_side).flat_map(|a| (vertex_side..n_agents).map(move |b| (a, b)));
    let instance = Instance::new(n_agents, house_roles.len(), edges.collect(), prefs)?;
    Ok(ReducedInstance {
        instance,
        target_envy: k * delta - choose2(k),
        provenance: Provenance {
            family: Family::CliqueBipD2,
            source: g.clone(),
            k,
            padding: None,
            agent_roles: roles,
            house_roles,
            trivial: k > delta,
        },
    })
}

/// Half vertex separator on a 3-regular graph: the agent graph is the source
/// graph and everybody likes the same `n/2 − ⌊k/2⌋` houses out of `n`.
pub fn gen_halfsep_3regular(g: &Graph, k: usize) -> Result<ReducedInstance> {
    if is_regular(g) != Some(3) {
        return Err(Error::NotThreeRegular);
    }
    let n = g.n();
    if k > n {
        return Err(Error::BadK(format!("k = {k} must lie in 0..={n}")));
    }
    let t = n / 2 - k / 2;
    let liked: Vec<usize> = (0..t).collect();
    let instance = Instance::from_graph(g.clone(), n, vec![liked; n])?;
    Ok(ReducedInstance {
        instance,
        target_envy: 2 * (k / 2),
        provenance: Provenance {
            family: Family::HalfSep3Reg,
            source: g.clone(),
            k,
            padding: None,
            agent_roles: (0..n).map(|v| AgentRole::Vertex { v, j: 0 }).collect(),
            house_roles: std::iter::repeat_n(HouseRole::Shared, t).chain(dummies(n - t)).collect(),
            trivial: false,
        },
    })
}

/// CLIQUE with a small vertex cover, complete bipartite agent graph: one
/// agent per vertex liking its incident edge houses, two agents per edge
/// liking that edge's house. `t_pad` isolated vertices are added first.
/// Target `k`.
pub fn gen_clique_vc_bipartite(g: &Graph, k: usize, t_pad: usize) -> Result<ReducedInstance> {
    let g = g.with_isolated(t_pad);
    let (n_v, n_e) = (g.n(), g.edge_count());
    if k == 0 || k > n_v {
        return Err(Error::BadK(format!("k = {k} must lie in 1..={n_v}")));
    }
    if choose2(k) > n_e {
        return Err(Error::BadK(format!("a {k}-clique needs {} edges, graph has {n_e}", choose2(k))));
    }
    let n_agents = n_v + 2 * n_e;
    let mut roles = Vec::with_capacity(n_agents);
    let mut prefs = Vec::with_capacity(n_agents);
    for v in 0..n_v {
        roles.push(AgentRole::Vertex { v, j: 0 });
        prefs.push(incident_edges(&g, v));
    }
    for e in 0..n_e {
        for j in 0..2 {
            roles.push(AgentRole::Edge { e, j });
            prefs.push(vec![e]);
        }
    }
    let house_roles: Vec<HouseRole> = (0..n_e)
        .map(|e| HouseRole::Edge { e, j: 0 })
        .chain(dummies(n_v + 2 * n_e - choose2(k)))
        .collect();
    let edges = (0..n_v).flat_map(|a| (n_v..n_agents).map(move |b| (a, b)));
    let instance = Instance::new(n_agents, house_roles.len(), edges.collect(), prefs)?;
    Ok(ReducedInstance {
        instance,
        target_envy: k,
        provenance: Provenance {
            family: Family::CliqueVcBip,
            source: g,
            k,
            padding: Some(t_pad),
            agent_roles: roles,
            house_roles,
            trivial: false,
        },
    })
}

/// CLIQUE with a small vertex cover, split agent graph: vertex agents form a
/// clique and see all `t` copies of every edge agent; each edge copy likes
/// its own house, each vertex agent likes every copy of its incident edge
/// houses. Target `k`.
pub fn gen_clique_vc_split(g: &Graph, k: usize, t: usize) -> Result<ReducedInstance> {
    if t == 0 {
        return Err(Error::BadT("t must be at least 1".into()));
    }
    let (n_v, n_e) = (g.n(), g.edge_count());
    if n_e == 0 {
        return Err(Error::BadK("source graph has no edges".into()));
    }
    if k == 0 || k > n_v {
        return Err(Error::BadK(format!("k = {k} must lie in 1..={n_v}")));
    }
    if choose2(k) > n_e {
        return Err(Error::BadK(format!("a {k}-clique needs {} edges, graph has {n_e}", choose2(k))));
    }
    let n_agents = n_v + n_e * t;
    let mut roles = Vec::with_capacity(n_agents);
    let mut prefs = Vec::with_capacity(n_agents);
    for v in 0..n_v {
        roles.push(AgentRole::Vertex { v, j: 0 });
        prefs.push(
            incident_edges(g, v)
                .into_iter()
                .flat_map(|e| (0..t).map(move |j| e * t + j))
                .collect(),
        );
    }
    for e in 0..n_e {
        for j in 0..t {
            roles.push(AgentRole::Edge { e, j });
            prefs.push(vec![e * t + j]);
        }
    }
    let house_roles: Vec<HouseRole> = (0..n_e)
        .flat_map(|e| (0..t).map(move |j| HouseRole::Edge { e, j }))
        .chain(dummies((n_e - choose2(k)) * t + n_v))
        .collect();
    let mut edges: Vec<(usize, usize)> = (0..n_v).flat_map(|u| (u + 1..n_v).map(move |v| (u, v))).collect();
    edges.extend((0..n_v).flat_map(|a| (n_v..n_agents).map(move |b| (a, b))));
    let instance = Instance::new(n_agents, house_roles.len(), edges, prefs)?;
    Ok(ReducedInstance {
        instance,
        target_envy: k,
        provenance: Provenance {
            family: Family::CliqueVcSplit,
            source: g.clone(),
            k,
            padding: Some(t),
            agent_roles: roles,
            house_roles,
            trivial: false,
        },
    })
}

fn incident_edges(g: &Graph, v: usize) -> Vec<usize> {
    g.neighbors(v).iter().map(|&w| g.edge_index(v, w).unwrap()).collect()
}

fn validate_clique(red: &ReducedInstance, clique: &[usize]) -> Result<Vec<usize>> {
    let g = &red.provenance.source;
    let k = red.provenance.k;
    let mut c = clique.to_vec();
    c.sort_unstable();
    c.dedup();
    if c.len() != k || c.len() != clique.len() || c.iter().any(|&v| v >= g.n()) || !g.is_clique(&c) {
        return Err(Error::NotAClique(format!("{clique:?} is not a {k}-clique of the source graph")));
    }
    Ok(c)
}

/// Gives every agent without a house the next dummy, in agent order.
fn fill_with_dummies(red: &ReducedInstance, mut houses: Vec<Option<usize>>) -> Allocation {
    let mut free = red
        .provenance
        .house_roles
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == HouseRole::Dummy)
        .map(|(h, _)| h);
    Allocation::new(
        houses
            .iter_mut()
            .map(|h| h.unwrap_or_else(|| free.next().expect("construction has enough dummies")))
            .collect(),
    )
}

/// Forward direction for [`Family::CliqueBipD2`]: the first copy of each
/// clique vertex gets its vertex house. Exactly the target envy.
pub fn witness_from_clique(red: &ReducedInstance, clique: &[usize]) -> Result<Allocation> {
    red.expect_family(Family::CliqueBipD2, "witness_from_clique")?;
    let c = validate_clique(red, clique)?;
    let mut houses = vec![None; red.instance.n_agents()];
    for &v in &c {
        let a = red.agent(AgentRole::Vertex { v, j: 0 }).expect("regular graph with δ ≥ 1");
        houses[a] = red.house(HouseRole::Vertex(v));
    }
    Ok(fill_with_dummies(red, houses))
}

/// Forward direction for the two vertex-cover families: every copy of every
/// clique edge gets that copy's edge house. At most the target envy.
pub fn witness_from_clique_vc(red: &ReducedInstance, clique: &[usize]) -> Result<Allocation> {
    red.expect_families(&[Family::CliqueVcBip, Family::CliqueVcSplit], "witness_from_clique_vc")?;
    let c = validate_clique(red, clique)?;
    let g = &red.provenance.source;
    let copies = match red.provenance.family {
        Family::CliqueVcSplit => red.provenance.padding.unwrap_or(1),
        _ => 1,
    };
    let mut houses = vec![None; red.instance.n_agents()];
    for (i, &u) in c.iter().enumerate() {
        for &v in &c[i + 1..] {
            let e = g.edge_index(u, v).expect("clique edge");
            for j in 0..copies {
                let a = red.agent(AgentRole::Edge { e, j }).unwrap();
                houses[a] = red.house(HouseRole::Edge { e, j });
            }
        }
    }
    Ok(fill_with_dummies(red, houses))
}

/// Forward direction for [`Family::HalfSep3Reg`]: `x` gets the liked houses.
/// `(s, x, y)` must partition the vertices with `|x| = |y| = n/2 − ⌊k/2⌋`,
/// `|s| = 2⌊k/2⌋` and no edge between `x` and `y`.
pub fn witness_from_separator(red: &ReducedInstance, s: &[usize], x: &[usize], y: &[usize]) -> Result<Allocation> {
    red.expect_family(Family::HalfSep3Reg, "witness_from_separator")?;
    let g = &red.provenance.source;
    let n = g.n();
    let k = red.provenance.k;
    let half = n / 2 - k / 2;
    check_half_separator(g, s, x, y)?;
    if x.len() != half || s.len() != 2 * (k / 2) {
        return Err(Error::BadPartition(format!(
            "need |S| = {} and |X| = |Y| = {half}, got {}, {}, {}",
            2 * (k / 2),
            s.len(),
            x.len(),
            y.len()
        )));
    }
    let mut x_sorted = x.to_vec();
    x_sorted.sort_unstable();
    let mut houses = vec![usize::MAX; n];
    for (h, &v) in x_sorted.iter().enumerate() {
        houses[v] = h;
    }
    let mut next = half;
    for slot in houses.iter_mut().filter(|h| **h == usize::MAX) {
        *slot = next;
        next += 1;
    }
    Ok(Allocation::new(houses))
}

/// Checks that `(s, x, y)` partitions the vertices into equal halves `x`, `y`
/// with no edge between them.
pub fn check_half_separator(g: &Graph, s: &[usize], x: &[usize], y: &[usize]) -> Result<()> {
    let mut side = vec![0u8; g.n()];
    for (tag, set) in [(1u8, s), (2, x), (3, y)] {
        for &v in set {
            if v >= g.n() {
                return Err(Error::BadPartition(format!("vertex {v} out of range")));
            }
            if side[v] != 0 {
                return Err(Error::BadPartition(format!("vertex {v} listed twice")));
            }
            side[v] = tag;
        }
    }
    if let Some(v) = side.iter().position(|&t| t == 0) {
        return Err(Error::BadPartition(format!("vertex {v} is in no part")));
    }
    if x.len() != y.len() {
        return Err(Error::BadPartition(format!("halves of sizes {} and {}", x.len(), y.len())));
    }
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| matches!((side[u], side[v]), (2, 3) | (3, 2)))
    {
        return Err(Error::BadPartition(format!("edge ({u}, {v}) joins the halves")));
    }
    Ok(())
}

/// Grows a half separator to exactly `2⌊k/2⌋` vertices by moving the largest
/// vertex of each half into the separator, keeping the halves equal.
pub fn pad_half_separator(
    g: &Graph,
    s: &[usize],
    x: &[usize],
    y: &[usize],
    k: usize,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    check_half_separator(g, s, x, y)?;
    let target = 2 * (k / 2);
    if s.len() > target {
        return Err(Error::BadPartition(format!("separator has {} > {target} vertices", s.len())));
    }
    let (mut s, mut x, mut y) = (s.to_vec(), x.to_vec(), y.to_vec());
    x.sort_unstable();
    y.sort_unstable();
    while s.len() < target {
        let (Some(a), Some(b)) = (x.pop(), y.pop()) else {
            return Err(Error::BadPartition("halves too small to pad".into()));
        };
        s.push(a);
        s.push(b);
    }
    s.sort_unstable();
    Ok((s, x, y))
}
