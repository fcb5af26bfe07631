//! Simple undirected graphs with stable vertex identities.
//!
//! Vertex ids are opaque `u32` values. They survive contraction: a merged
//! vertex keeps the smallest id of its group, so merge maps compose
//! deterministically.

mod coloring;
mod connectivity;
mod contract;
mod dense;

pub use coloring::{ceil_sqrt, color_budget, proper_color_t_ell, Coloring};
pub use connectivity::{analyze_connectivity, Connectivity};
pub use contract::{contract_edges, MergeMap};
pub(crate) use dense::{bits, mask_of, DenseGraph};

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("graph is not in T_{ell}")]
    NotInClass { ell: u32 },
    #[error("graph is too large for this operation ({0} vertices)")]
    TooLarge(usize),
}

/// An undirected edge stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Panics on a self-loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        Edge::try_new(a, b).unwrap_or_else(|| panic!("self-loop {a}-{b}"))
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((a, b): (Vertex, Vertex)) -> Edge {
        Edge::new(a, b)
    }
}

/// Simple undirected graph: no loops, no parallel edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// Builds a graph from a vertex list and an edge list. Endpoints missing
    /// from `vertices` are added; duplicate edges collapse.
    pub fn from_parts<V, E>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v);
        }
        for (a, b) in edges {
            g.add_vertex(a);
            g.add_vertex(b);
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn from_edges<E>(edges: E) -> Result<Graph, GraphError>
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Graph::from_parts(std::iter::empty(), edges)
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: u32) -> Graph {
        let mut g = Graph::from_parts(1..=n, std::iter::empty()).unwrap();
        for v in 1..n {
            g.add_edge(v, v + 1).unwrap();
        }
        g
    }

    /// Cycle `1 - 2 - ... - n - 1`, `n >= 3`.
    pub fn cycle(n: u32) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n, 1).unwrap();
        g
    }

    pub fn complete(n: u32) -> Graph {
        let mut g = Graph::from_parts(1..=n, std::iter::empty()).unwrap();
        for a in 1..=n {
            for b in a + 1..=n {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    /// `K_{a,b}` with sides `1..=a` and `a+1..=a+b`.
    pub fn complete_bipartite(a: u32, b: u32) -> Graph {
        let mut g = Graph::from_parts(1..=a + b, std::iter::empty()).unwrap();
        for x in 1..=a {
            for y in a + 1..=a + b {
                g.add_edge(x, y).unwrap();
            }
        }
        g
    }

    /// Star `K_{1,leaves}` centered at vertex 1.
    pub fn star(leaves: u32) -> Graph {
        Graph::complete_bipartite(1, leaves)
    }

    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Adds edge `a-b`. Both endpoints must exist. Returns whether the edge
    /// was new.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for x in [a, b] {
            if !self.adj.contains_key(&x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        let fresh = self.adj.get_mut(&a).unwrap().insert(b);
        self.adj.get_mut(&b).unwrap().insert(a);
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, a: Vertex, b: Vertex) -> bool {
        let had = self.adj.get_mut(&a).is_some_and(|n| n.remove(&b));
        if had {
            self.adj.get_mut(&b).unwrap().remove(&a);
        }
        had
    }

    pub fn remove_vertex(&mut self, v: Vertex) -> bool {
        match self.adj.remove(&v) {
            Some(nbrs) => {
                for u in nbrs {
                    self.adj.get_mut(&u).unwrap().remove(&v);
                }
                true
            }
            None => false,
        }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj.get(&a).is_some_and(|n| n.contains(&b))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo, e.hi)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(&a, nbrs)| {
            nbrs.range(a + 1..).map(move |&b| Edge { lo: a, hi: b })
        })
    }

    pub fn edge_vec(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// Neighbors in ascending order. Empty for unknown vertices.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: Vertex) -> Option<&BTreeSet<Vertex>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn min_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next().copied()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    pub fn induced_subgraph(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, nbrs)| (v, nbrs.intersection(keep).copied().collect()))
            .collect();
        Graph { adj }
    }

    pub fn without_vertices(&self, drop: &BTreeSet<Vertex>) -> Graph {
        let keep = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let comp = self.reach(start, |_| true);
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`.
    pub fn reach<F: Fn(Vertex) -> bool>(&self, start: Vertex, allow: F) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::new();
        if !self.contains_vertex(start) || !allow(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if allow(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// The empty graph counts as disconnected.
    pub fn is_connected(&self) -> bool {
        match self.min_vertex() {
            Some(v) => self.reach(v, |_| true).len() == self.vertex_count(),
            None => false,
        }
    }

    /// Whether `set` is nonempty and induces a connected subgraph.
    pub fn is_connected_set(&self, set: &BTreeSet<Vertex>) -> bool {
        match set.iter().next() {
            Some(&v) => self.reach(v, |u| set.contains(&u)).len() == set.len(),
            None => false,
        }
    }

    /// `|E| - |V| + 1`, the number of edges above a spanning tree for a
    /// connected graph.
    pub fn excess(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1
    }

    /// Membership in `T_ell`: connected and `|E| <= |V| - 1 + ell`.
    pub fn is_in_t_ell(&self, ell: u32) -> bool {
        self.is_connected() && self.excess() <= ell as i64
    }

    /// BFS spanning forest edges, rooted at the smallest vertex of each
    /// component, visiting neighbors in ascending order.
    pub fn spanning_forest(&self) -> Vec<Edge> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for root in self.vertices() {
            if !seen.insert(root) {
                continue;
            }
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if seen.insert(u) {
                        out.push(Edge::new(v, u));
                        queue.push_back(u);
                    }
                }
            }
        }
        out
    }

    /// Replaces edge `a-b` by the path `a - mid - b`.
    pub fn subdivide_edge(&mut self, e: Edge, mid: Vertex) -> Result<(), GraphError> {
        if !self.contains_edge(e) {
            return Err(GraphError::UnknownEdge(e));
        }
        if self.contains_vertex(mid) {
            return Err(GraphError::SelfLoop(mid));
        }
        self.remove_edge(e.lo, e.hi);
        self.add_vertex(mid);
        self.add_edge(e.lo, mid)?;
        self.add_edge(mid, e.hi)?;
        Ok(())
    }
}

/// Free-function form of [`Graph::is_in_t_ell`].
pub fn is_in_t_ell(g: &Graph, ell: u32) -> bool {
    g.is_in_t_ell(ell)
}
