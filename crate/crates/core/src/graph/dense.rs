use super::{Graph, GraphError, Vertex};

/// Bitmask adjacency for graphs with at most 64 vertices. Index `i` is the
/// `i`-th smallest vertex id.
#[derive(Clone, Debug)]
pub(crate) struct DenseGraph {
    pub ids: Vec<Vertex>,
    pub adj: Vec<u64>,
}

impl DenseGraph {
    pub fn new(g: &Graph) -> Result<DenseGraph, GraphError> {
        let n = g.vertex_count();
        if n > 64 {
            return Err(GraphError::TooLarge(n));
        }
        let ids: Vec<Vertex> = g.vertices().collect();
        let adj = ids
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .map(|u| 1u64 << ids.binary_search(&u).unwrap())
                    .fold(0, |m, b| m | b)
            })
            .collect();
        Ok(DenseGraph { ids, adj })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.adj[i].count_ones()
    }

    /// Vertices reachable from `start` inside `allowed`.
    pub fn reach(&self, start: usize, allowed: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & allowed & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }
}

pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}
