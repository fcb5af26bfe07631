use std::collections::BTreeMap;

use super::{Edge, Graph, GraphError, Vertex};

/// Surjective map from original vertices to contracted vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeMap {
    map: BTreeMap<Vertex, Vertex>,
}

impl MergeMap {
    pub fn identity(g: &Graph) -> MergeMap {
        MergeMap {
            map: g.vertices().map(|v| (v, v)).collect(),
        }
    }

    pub fn get(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// `self` followed by `next`. Vertices that `next` does not know are
    /// dropped.
    pub fn then(&self, next: &MergeMap) -> MergeMap {
        MergeMap {
            map: self
                .map
                .iter()
                .filter_map(|(&v, &mid)| next.get(mid).map(|w| (v, w)))
                .collect(),
        }
    }

    /// Preimage of every contracted vertex.
    pub fn groups(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut out: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for (&v, &w) in &self.map {
            out.entry(w).or_default().push(v);
        }
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the two classes, keeping the smaller root. Returns false if they
    /// were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Contracts every edge of `f` at once. Each connected group of `f`-edges
/// becomes one vertex named by its smallest member; loops and parallel
/// edges disappear.
pub fn contract_edges(g: &Graph, f: &[Edge]) -> Result<(Graph, MergeMap), GraphError> {
    let ids: Vec<Vertex> = g.vertices().collect();
    let index: BTreeMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for &e in f {
        if !g.contains_edge(e) {
            return Err(GraphError::UnknownEdge(e));
        }
        uf.union(index[&e.lo()], index[&e.hi()]);
    }
    // ids are sorted, so the smallest root index is the smallest member
    let map: BTreeMap<Vertex, Vertex> = ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, ids[uf.find(i)]))
        .collect();
    let mut h = Graph::from_parts(map.values().copied(), std::iter::empty())?;
    for e in g.edges() {
        let (a, b) = (map[&e.lo()], map[&e.hi()]);
        if a != b {
            h.add_edge(a, b)?;
        }
    }
    Ok((h, MergeMap { map }))
}
