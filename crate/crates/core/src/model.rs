//! Instances, allocations and exact envy/happiness evaluation.
//!
//! Agents and houses are dense `0..n` / `0..m` indices. An agent `a` envies a
//! neighbour `b` under an allocation `phi` when `phi(a)` is not one of `a`'s
//! preferred houses while `phi(b)` is.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Unvalidated instance data, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub n_agents: usize,
    pub n_houses: usize,
    pub edges: Vec<(usize, usize)>,
    pub preferences: Vec<Vec<usize>>,
}

/// A validated house-allocation instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: Graph,
    n_houses: usize,
    preferences: Vec<Vec<usize>>,
    pref_bits: Vec<FixedBitSet>,
}

/// Validates raw instance data. Total: every input yields an instance or an
/// [`Error::InvalidInstance`].
pub fn validate_instance(raw: RawInstance) -> Result<Instance> {
    Instance::new(raw.n_agents, raw.n_houses, raw.edges, raw.preferences)
}

impl Instance {
    pub fn new(
        n_agents: usize,
        n_houses: usize,
        edges: Vec<(usize, usize)>,
        preferences: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let graph = Graph::new(n_agents, edges).map_err(|e| match e {
            Error::InvalidGraph(msg) => Error::InvalidInstance(msg),
            other => other,
        })?;
        Instance::from_graph(graph, n_houses, preferences)
    }

    pub fn from_graph(graph: Graph, n_houses: usize, mut preferences: Vec<Vec<usize>>) -> Result<Self> {
        if preferences.len() != graph.n() {
            return Err(Error::InvalidInstance(format!(
                "{} preference lists for {} agents",
                preferences.len(),
                graph.n()
            )));
        }
        let mut pref_bits = Vec::with_capacity(preferences.len());
        for (a, prefs) in preferences.iter_mut().enumerate() {
            let mut bits = FixedBitSet::with_capacity(n_houses);
            for &h in prefs.iter() {
                if h >= n_houses {
                    return Err(Error::InvalidInstance(format!(
                        "agent {a} prefers house {h}, but there are only {n_houses} houses"
                    )));
                }
                if bits.put(h) {
                    return Err(Error::InvalidInstance(format!(
                        "agent {a} lists house {h} twice"
                    )));
                }
            }
            prefs.sort_unstable();
            pref_bits.push(bits);
        }
        Ok(Instance {
            graph,
            n_houses,
            preferences,
            pref_bits,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.graph.n()
    }

    pub fn n_houses(&self) -> usize {
        self.n_houses
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        self.graph.edges()
    }

    pub fn neighbors(&self, a: usize) -> &[usize] {
        self.graph.neighbors(a)
    }

    /// Sorted preferred houses of agent `a`.
    pub fn preferences(&self, a: usize) -> &[usize] {
        &self.preferences[a]
    }

    pub fn all_preferences(&self) -> &[Vec<usize>] {
        &self.preferences
    }

    pub fn preference_bits(&self, a: usize) -> &FixedBitSet {
        &self.pref_bits[a]
    }

    pub fn prefers(&self, a: usize, h: usize) -> bool {
        self.pref_bits[a].contains(h)
    }

    /// Largest preference-list size.
    pub fn max_preference_size(&self) -> usize {
        self.preferences.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// A dummy house is preferred by nobody.
    pub fn is_dummy(&self, h: usize) -> bool {
        !self.pref_bits.iter().any(|p| p.contains(h))
    }

    pub fn dummy_houses(&self) -> Vec<usize> {
        let mut used = FixedBitSet::with_capacity(self.n_houses);
        for p in &self.pref_bits {
            used.union_with(p);
        }
        (0..self.n_houses).filter(|&h| !used.contains(h)).collect()
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            n_agents: self.n_agents(),
            n_houses: self.n_houses,
            edges: self.edges().to_vec(),
            preferences: self.preferences.clone(),
        }
    }

    /// Copy with one extra house nobody prefers.
    pub fn with_extra_dummy(&self) -> Instance {
        Instance::from_graph(self.graph.clone(), self.n_houses + 1, self.preferences.clone())
            .expect("adding a dummy house keeps the instance valid")
    }

    /// Copy without edge number `index` (in [`Instance::edges`] order).
    pub fn without_edge(&self, index: usize) -> Instance {
        Instance::from_graph(self.graph.without_edge(index), self.n_houses, self.preferences.clone())
            .expect("deleting an edge keeps the instance valid")
    }

    pub(crate) fn check_houses_suffice(&self) -> Result<()> {
        if self.n_houses < self.n_agents() {
            return Err(Error::InstanceInfeasible {
                agents: self.n_agents(),
                houses: self.n_houses,
            });
        }
        Ok(())
    }
}

/// An injective map from agents to houses, `houses[a] = phi(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    houses: Vec<usize>,
}

impl Allocation {
    pub fn new(houses: Vec<usize>) -> Self {
        Allocation { houses }
    }

    pub fn houses(&self) -> &[usize] {
        &self.houses
    }

    pub fn house_of(&self, a: usize) -> usize {
        self.houses[a]
    }

    pub fn len(&self) -> usize {
        self.houses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.houses.is_empty()
    }

    /// `inverse[h]` is the agent holding house `h`, if any.
    pub fn inverse(&self, n_houses: usize) -> Vec<Option<usize>> {
        let mut inv = vec![None; n_houses];
        for (a, &h) in self.houses.iter().enumerate() {
            if h < n_houses {
                inv[h] = Some(a);
            }
        }
        inv
    }

    /// Checks length, range and injectivity against `inst`.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        if self.houses.len() != inst.n_agents() {
            return Err(Error::InvalidAllocation(format!(
                "allocation covers {} agents, instance has {}",
                self.houses.len(),
                inst.n_agents()
            )));
        }
        let mut seen = FixedBitSet::with_capacity(inst.n_houses());
        for (a, &h) in self.houses.iter().enumerate() {
            if h >= inst.n_houses() {
                return Err(Error::InvalidAllocation(format!(
                    "agent {a} gets house {h}, but there are only {} houses",
                    inst.n_houses()
                )));
            }
            if seen.put(h) {
                return Err(Error::InvalidAllocation(format!("house {h} assigned twice")));
            }
        }
        Ok(())
    }
}

/// Per-agent envy and happiness of an allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyReport {
    /// Neighbours each agent envies, sorted.
    pub envy_sets: Vec<Vec<usize>>,
    pub envious: Vec<bool>,
    pub happy: Vec<bool>,
    pub n_envious: usize,
    pub n_happy: usize,
}

impl EnvyReport {
    fn from_parts(envy_sets: Vec<Vec<usize>>, envious: Vec<bool>, happy: Vec<bool>) -> Self {
        let n_envious = envious.iter().filter(|&&e| e).count();
        let n_happy = happy.iter().filter(|&&h| h).count();
        EnvyReport {
            envy_sets,
            envious,
            happy,
            n_envious,
            n_happy,
        }
    }
}

fn envy_sets(inst: &Instance, alloc: &Allocation) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = inst.n_agents();
    let mut sets = vec![Vec::new(); n];
    let mut happy = vec![false; n];
    for a in 0..n {
        if inst.prefers(a, alloc.house_of(a)) {
            happy[a] = true;
            continue;
        }
        sets[a] = inst
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&b| inst.prefers(a, alloc.house_of(b)))
            .collect();
    }
    (sets, happy)
}

/// Evaluates envy and happiness of `alloc` on `inst`.
pub fn evaluate(inst: &Instance, alloc: &Allocation) -> Result<EnvyReport> {
    alloc.validate(inst)?;
    let (sets, happy) = envy_sets(inst, alloc);
    let envious = sets.iter().map(|s| !s.is_empty()).collect();
    Ok(EnvyReport::from_parts(sets, envious, happy))
}

/// An instance with per-agent feasibility sets and a set of angry agents.
///
/// An angry agent is envious exactly when it does not receive a preferred
/// house, regardless of its neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedInstance {
    base: Instance,
    feasible: Vec<Vec<usize>>,
    feasible_bits: Vec<FixedBitSet>,
    angry: Vec<bool>,
}

impl AnnotatedInstance {
    pub fn new(base: Instance, mut feasible: Vec<Vec<usize>>, angry: &[usize]) -> Result<Self> {
        let n = base.n_agents();
        let m = base.n_houses();
        if feasible.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} feasibility sets for {n} agents",
                feasible.len()
            )));
        }
        let mut bits = Vec::with_capacity(n);
        for (a, f) in feasible.iter_mut().enumerate() {
            let mut set = FixedBitSet::with_capacity(m);
            for &h in f.iter() {
                if h >= m {
                    return Err(Error::InvalidInstance(format!(
                        "feasible house {h} of agent {a} out of range"
                    )));
                }
                if set.put(h) {
                    return Err(Error::InvalidInstance(format!(
                        "agent {a} lists feasible house {h} twice"
                    )));
                }
            }
            f.sort_unstable();
            bits.push(set);
        }
        let mut angry_flags = vec![false; n];
        for &a in angry {
            if a >= n {
                return Err(Error::InvalidInstance(format!("angry agent {a} out of range")));
            }
            if std::mem::replace(&mut angry_flags[a], true) {
                return Err(Error::InvalidInstance(format!("agent {a} listed as angry twice")));
            }
        }
        Ok(AnnotatedInstance {
            base,
            feasible,
            feasible_bits: bits,
            angry: angry_flags,
        })
    }

    /// No angry agents, every house feasible for everyone.
    pub fn plain(base: Instance) -> Self {
        let all: Vec<usize> = (0..base.n_houses()).collect();
        let feasible = vec![all; base.n_agents()];
        AnnotatedInstance::new(base, feasible, &[]).expect("plain annotation is valid")
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn feasible(&self, a: usize) -> &[usize] {
        &self.feasible[a]
    }

    pub fn feasible_bits(&self, a: usize) -> &FixedBitSet {
        &self.feasible_bits[a]
    }

    pub fn is_angry(&self, a: usize) -> bool {
        self.angry[a]
    }

    pub fn angry_agents(&self) -> Vec<usize> {
        (0..self.angry.len()).filter(|&a| self.angry[a]).collect()
    }

    /// True when every agent is angry-free and may take every house.
    pub fn is_plain(&self) -> bool {
        !self.angry.iter().any(|&b| b)
            && self.feasible.iter().all(|f| f.len() == self.base.n_houses())
    }
}

/// Evaluates `alloc` under the annotated semantics. The flag reports whether
/// every agent got a feasible house.
///
/// For angry agents `envy_sets` still lists the neighbours holding a
/// preferred house, but `envious` ignores them: an angry agent is envious iff
/// it is unhappy, so it may be envious with an empty envy set.
pub fn evaluate_annotated(ann: &AnnotatedInstance, alloc: &Allocation) -> Result<(bool, EnvyReport)> {
    let inst = ann.base();
    alloc.validate(inst)?;
    let feasible_ok = (0..inst.n_agents()).all(|a| ann.feasible_bits(a).contains(alloc.house_of(a)));
    let (sets, happy) = envy_sets(inst, alloc);
    let envious = (0..inst.n_agents())
        .map(|a| if ann.is_angry(a) { !happy[a] } else { !sets[a].is_empty() })
        .collect();
    Ok((feasible_ok, EnvyReport::from_parts(sets, envious, happy)))
}
