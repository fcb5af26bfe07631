//! Minimum connected vertex covers and shatters of vertex sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{bits, DenseGraph, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CvcError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex set is empty, unknown or induces a disconnected subgraph")]
    BadSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Split of a connected set `X` into a connected vertex cover of `G[X]`
/// that contains the boundary of `X`, plus the remaining vertices as
/// singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shatter {
    pub core: BTreeSet<Vertex>,
    pub singletons: BTreeSet<Vertex>,
}

/// A minimum connected vertex cover of size at most `budget`, the
/// lexicographically smallest among all minimum ones.
///
/// A graph without edges is covered by the empty set.
pub fn min_connected_vertex_cover(
    g: &Graph,
    budget: usize,
) -> Result<Option<BTreeSet<Vertex>>, CvcError> {
    if !g.is_connected() {
        return Err(CvcError::Disconnected);
    }
    let d = DenseGraph::new(g)?;
    Ok(cvc_dense(&d.adj, budget).map(|m| bits(m).map(|i| d.ids[i]).collect()))
}

/// Vertices of `x` with a neighbor outside `x`.
pub fn boundary(g: &Graph, x: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    x.iter()
        .copied()
        .filter(|&v| g.neighbors(v).any(|u| !x.contains(&u)))
        .collect()
}

/// Minimum shatter of `x` whose core has at most `budget` vertices.
///
/// The core is a minimum connected vertex cover of `G[x]` with a pendant
/// vertex attached to every boundary vertex, which forces the boundary into
/// the cover. A single vertex is its own core regardless of the budget.
pub fn min_shatter(
    g: &Graph,
    x: &BTreeSet<Vertex>,
    budget: usize,
) -> Result<Option<Shatter>, CvcError> {
    if x.iter().any(|&v| !g.contains_vertex(v)) || !g.is_connected_set(x) {
        return Err(CvcError::BadSet);
    }
    if x.len() == 1 {
        return Ok(Some(Shatter {
            core: x.clone(),
            singletons: BTreeSet::new(),
        }));
    }
    let mut aux = g.induced_subgraph(x);
    let mut next = g.max_vertex().unwrap() + 1;
    let mut pendants = BTreeSet::new();
    for b in boundary(g, x) {
        aux.add_vertex(next);
        aux.add_edge(b, next)?;
        pendants.insert(next);
        next += 1;
    }
    let Some(core) = min_connected_vertex_cover(&aux, budget)? else {
        return Ok(None);
    };
    assert!(
        core.is_disjoint(&pendants),
        "a minimum connected cover never uses a pendant"
    );
    let singletons = x.difference(&core).copied().collect();
    Ok(Some(Shatter { core, singletons }))
}

/// Bitmask form of [`min_connected_vertex_cover`]. Vertex `i` is bit `i`;
/// ties go to the set whose sorted index list is smallest.
pub(crate) fn cvc_dense(adj: &[u64], budget: usize) -> Option<u64> {
    cvc_dense_required(adj, 0, budget)
}

/// Minimum connected vertex cover containing `required`. Same answer as
/// attaching a pendant to every required vertex.
pub(crate) fn cvc_dense_required(adj: &[u64], required: u64, budget: usize) -> Option<u64> {
    let n = adj.len();
    if required == 0 && adj.iter().all(|&m| m == 0) {
        return Some(0);
    }
    let start = (required.count_ones() as usize).max(1);
    for size in start..=budget.min(n) {
        let mut best: Option<u64> = None;
        branch(adj, required, size, &mut |cover| {
            let free = crate::graph::mask_of(n) & !cover;
            extend(adj, cover, free, size - cover.count_ones() as usize, &mut best);
        });
        if best.is_some() {
            return best;
        }
    }
    None
}

// Every vertex cover of size `size` contains one of the covers reported here.
fn branch<F: FnMut(u64)>(adj: &[u64], cover: u64, size: usize, report: &mut F) {
    let open = (0..adj.len()).find(|&v| cover & (1 << v) == 0 && adj[v] & !cover != 0);
    match open {
        None => report(cover),
        Some(_) if cover.count_ones() as usize == size => {}
        Some(v) => {
            let u = (adj[v] & !cover).trailing_zeros() as usize;
            branch(adj, cover | (1 << v), size, report);
            branch(adj, cover | (1 << u), size, report);
        }
    }
}

fn extend(adj: &[u64], set: u64, free: u64, extra: usize, best: &mut Option<u64>) {
    if extra == 0 {
        if is_connected_mask(adj, set) && best.is_none_or(|b| lex_smaller(set, b)) {
            *best = Some(set);
        }
        return;
    }
    let mut rest = free;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        if (rest.count_ones() as usize) + 1 < extra {
            break;
        }
        extend(adj, set | (1 << i), rest, extra - 1, best);
    }
}

pub(crate) fn is_connected_mask(adj: &[u64], set: u64) -> bool {
    if set == 0 {
        return false;
    }
    let mut seen = set & set.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & set & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == set
}

// For sets of equal size: the one holding the lowest differing element
// has the smaller sorted list.
fn lex_smaller(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}
