//! Witness structures: partitions of `V(G)` into connected bags, one bag per
//! vertex of the contracted graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("bags do not partition the vertex set")]
    NotPartition,
    #[error("bag containing vertex {0} is disconnected")]
    DisconnectedBag(Vertex),
    #[error("quotient has {0} vertices, need at least 3")]
    QuotientTooSmall(usize),
}

/// Why [`verify_witness`] rejected a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invalidity {
    NotPartition,
    DisconnectedBag,
    QuotientOutsideClass,
    OverBudget,
}

impl Invalidity {
    pub fn code(self) -> &'static str {
        match self {
            Invalidity::NotPartition => "not-partition",
            Invalidity::DisconnectedBag => "disconnected-bag",
            Invalidity::QuotientOutsideClass => "quotient-outside-class",
            Invalidity::OverBudget => "over-budget",
        }
    }
}

impl fmt::Display for Invalidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub cost: usize,
    pub reason: Option<Invalidity>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.reason.is_none()
    }
}

/// Bags ordered by their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WitnessStructure {
    bags: Vec<BTreeSet<Vertex>>,
}

impl WitnessStructure {
    /// Empty bags are kept so that validation can reject them.
    pub fn new(mut bags: Vec<BTreeSet<Vertex>>) -> WitnessStructure {
        bags.sort_by_key(|b| b.iter().next().copied());
        WitnessStructure { bags }
    }

    pub fn singletons(g: &Graph) -> WitnessStructure {
        WitnessStructure::new(g.vertices().map(|v| BTreeSet::from([v])).collect())
    }

    pub fn bags(&self) -> &[BTreeSet<Vertex>] {
        &self.bags
    }

    pub fn into_bags(self) -> Vec<BTreeSet<Vertex>> {
        self.bags
    }

    /// `sum(|bag| - 1)`, the number of contracted edges.
    pub fn cost(&self) -> usize {
        self.bags.iter().map(|b| b.len().saturating_sub(1)).sum()
    }

    pub fn big_bags(&self) -> impl Iterator<Item = &BTreeSet<Vertex>> {
        self.bags.iter().filter(|b| b.len() >= 2)
    }

    pub fn is_partition_of(&self, g: &Graph) -> bool {
        let mut seen = BTreeSet::new();
        for bag in &self.bags {
            if bag.is_empty() {
                return false;
            }
            for &v in bag {
                if !g.contains_vertex(v) || !seen.insert(v) {
                    return false;
                }
            }
        }
        seen.len() == g.vertex_count()
    }

    /// Vertex to the smallest member of its bag.
    pub fn representative_map(&self) -> BTreeMap<Vertex, Vertex> {
        let mut out = BTreeMap::new();
        for bag in &self.bags {
            if let Some(&rep) = bag.iter().next() {
                for &v in bag {
                    out.insert(v, rep);
                }
            }
        }
        out
    }

    /// Edges of a BFS spanning tree of every bag; contracting them yields
    /// the quotient.
    pub fn solution_edges(&self, g: &Graph) -> Vec<Edge> {
        let mut out = Vec::new();
        for bag in &self.bags {
            out.extend(bag_tree(g, bag).into_iter().map(|(p, c)| Edge::new(p, c)));
        }
        out.sort();
        out
    }
}

/// An edge set `F` together with the budget it is judged against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSolution {
    pub edges: Vec<Edge>,
    pub k: i64,
}

impl ContractionSolution {
    pub fn new(mut edges: Vec<Edge>, k: i64) -> ContractionSolution {
        edges.sort();
        edges.dedup();
        ContractionSolution { edges, k }
    }

    pub fn empty(k: i64) -> ContractionSolution {
        ContractionSolution { edges: Vec::new(), k }
    }

    /// `min(|F|, k + 1)`.
    pub fn cost(&self) -> i64 {
        capped_value(self.edges.len(), self.k)
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

pub fn capped_value(size: usize, k: i64) -> i64 {
    (size as i64).min(k + 1)
}

/// Bags are the components of `(V(G), f)`.
pub fn witness_from_solution(g: &Graph, f: &[Edge]) -> WitnessStructure {
    let sub = Graph::from_parts(g.vertices(), f.iter().map(|e| e.endpoints()))
        .expect("solution edges are simple");
    WitnessStructure::new(sub.components())
}

/// Contracts every bag to its smallest vertex.
pub fn quotient(g: &Graph, w: &WitnessStructure) -> Result<Graph, WitnessError> {
    if !w.is_partition_of(g) {
        return Err(WitnessError::NotPartition);
    }
    for bag in &w.bags {
        if !g.is_connected_set(bag) {
            return Err(WitnessError::DisconnectedBag(*bag.iter().next().unwrap()));
        }
    }
    Ok(quotient_unchecked(g, &w.representative_map()))
}

pub(crate) fn quotient_unchecked(g: &Graph, rep: &BTreeMap<Vertex, Vertex>) -> Graph {
    let mut h = Graph::from_parts(rep.values().copied(), std::iter::empty()).unwrap();
    for e in g.edges() {
        let (a, b) = (rep[&e.lo()], rep[&e.hi()]);
        if a != b {
            h.add_edge(a, b).unwrap();
        }
    }
    h
}

/// Checks, in order: partition, connected bags, quotient in `T_ell`, cost
/// within `k`. The cost is reported even for invalid witnesses.
pub fn verify_witness(g: &Graph, w: &WitnessStructure, ell: u32, k: i64) -> Verdict {
    let cost = w.cost();
    let reason = match quotient(g, w) {
        Err(WitnessError::NotPartition) => Some(Invalidity::NotPartition),
        Err(_) => Some(Invalidity::DisconnectedBag),
        Ok(q) if !q.is_in_t_ell(ell) => Some(Invalidity::QuotientOutsideClass),
        Ok(_) if cost as i64 > k => Some(Invalidity::OverBudget),
        Ok(_) => None,
    };
    Verdict { cost, reason }
}

/// Verifies an edge set by way of its witness structure. Edges outside `g`
/// make the solution invalid.
pub fn verify_solution(g: &Graph, f: &[Edge], ell: u32, k: i64) -> Verdict {
    if f.iter().any(|&e| !g.contains_edge(e)) {
        return Verdict {
            cost: f.len(),
            reason: Some(Invalidity::NotPartition),
        };
    }
    let w = witness_from_solution(g, f);
    let mut v = verify_witness(g, &w, ell, k);
    // a redundant edge set is still judged by how many edges it contracts
    if v.is_valid() && f.len() as i64 > k {
        v.reason = Some(Invalidity::OverBudget);
    }
    v.cost = f.len();
    v
}

/// Rewrites the witness so that every leaf of the quotient is a singleton
/// bag, without changing the cost or the quotient up to isomorphism.
///
/// Repeatedly takes the big leaf bag with the smallest vertex, a BFS spanning
/// tree of it rooted at its smallest vertex, the smallest vertex `u` of the
/// bag adjacent to the neighboring bag, and the smallest tree leaf `v != u`.
/// Everything except `v` moves into the neighboring bag.
pub fn normalize_leaves(g: &Graph, w: &WitnessStructure) -> Result<WitnessStructure, WitnessError> {
    let q = quotient(g, w)?;
    if q.vertex_count() < 3 {
        return Err(WitnessError::QuotientTooSmall(q.vertex_count()));
    }
    let mut bags = w.bags.clone();
    loop {
        let rep: BTreeMap<Vertex, usize> = bags
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.iter().map(move |&v| (v, i)))
            .collect();
        let leaf = (0..bags.len()).find(|&i| {
            bags[i].len() >= 2 && {
                let outside: BTreeSet<usize> = bags[i]
                    .iter()
                    .flat_map(|&v| g.neighbors(v))
                    .map(|u| rep[&u])
                    .filter(|&j| j != i)
                    .collect();
                outside.len() == 1
            }
        });
        let Some(i) = leaf else { break };
        let j = bags[i]
            .iter()
            .flat_map(|&v| g.neighbors(v))
            .map(|u| rep[&u])
            .find(|&j| j != i)
            .unwrap();
        let u_star = *bags[i]
            .iter()
            .find(|&&v| g.neighbors(v).any(|x| rep[&x] == j))
            .unwrap();
        let tree = bag_tree(g, &bags[i]);
        let mut tdeg: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &(p, c) in &tree {
            *tdeg.entry(p).or_default() += 1;
            *tdeg.entry(c).or_default() += 1;
        }
        let v_star = *tdeg
            .iter()
            .find(|&(&v, &d)| d == 1 && v != u_star)
            .unwrap()
            .0;
        let moved: Vec<Vertex> = bags[i].iter().copied().filter(|&v| v != v_star).collect();
        bags[j].extend(moved);
        bags[i] = BTreeSet::from([v_star]);
    }
    Ok(WitnessStructure::new(bags))
}

// (parent, child) pairs of a BFS tree of `bag` from its smallest vertex.
fn bag_tree(g: &Graph, bag: &BTreeSet<Vertex>) -> Vec<(Vertex, Vertex)> {
    let Some(&root) = bag.iter().next() else {
        return Vec::new();
    };
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v) {
            if bag.contains(&u) && seen.insert(u) {
                out.push((v, u));
                queue.push_back(u);
            }
        }
    }
    out
}
