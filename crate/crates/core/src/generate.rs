//! Instance generators: seeded random connected graphs, all connected
//! graphs up to isomorphism, and the cycle gadget that turns a tree
//! contraction instance into a `T_ell` one.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::Instance;

/// Largest vertex count [`gen_random_instance`] accepts.
pub const MAX_RANDOM_VERTICES: usize = 256;
/// Largest vertex count [`connected_graphs`] enumerates.
pub const MAX_ENUMERATED_VERTICES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no connected sample after {0} attempts")]
    GaveUp(u32),
}

/// A connected `G(n, p)` sample on vertices `1..=n`, resampled until
/// connected. Deterministic in `seed`.
pub fn gen_random_instance(n: usize, edge_prob: f64, k: i64, ell: u32, seed: u64) -> Result<Instance, GenError> {
    Ok(Instance::new(random_connected_graph(n, edge_prob, seed)?, k, ell))
}

pub fn random_connected_graph(n: usize, edge_prob: f64, seed: u64) -> Result<Graph, GenError> {
    if n == 0 || n > MAX_RANDOM_VERTICES {
        return Err(GenError::Parameter(format!("n = {n} outside 1..={MAX_RANDOM_VERTICES}")));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(GenError::Parameter(format!("edge probability {edge_prob} outside (0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: u32 = 10_000;
    for _ in 0..ATTEMPTS {
        let mut edges = Vec::new();
        for a in 1..=n as u32 {
            for b in a + 1..=n as u32 {
                if rng.gen_bool(edge_prob) {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_parts(1..=n as u32, edges).unwrap();
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::GaveUp(ATTEMPTS))
}

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices, with vertices `1..=n`.
///
/// Every connected graph has a vertex whose removal keeps it connected, so
/// extending each class on `n - 1` vertices by a vertex joined to a
/// nonempty subset reaches all classes.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, GenError> {
    if n == 0 || n > MAX_ENUMERATED_VERTICES {
        return Err(GenError::Parameter(format!("n = {n} outside 1..={MAX_ENUMERATED_VERTICES}")));
    }
    let mut level: Vec<Vec<u32>> = vec![vec![0]];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for adj in &level {
            for subset in 1u32..(1 << (size - 1)) {
                let mut grown = adj.clone();
                for (v, row) in grown.iter_mut().enumerate() {
                    if subset >> v & 1 == 1 {
                        *row |= 1 << (size - 1);
                    }
                }
                grown.push(subset);
                if seen.insert(canonical_code(&grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    Ok(level.iter().map(|adj| to_graph(adj)).collect())
}

fn to_graph(adj: &[u32]) -> Graph {
    let n = adj.len() as u32;
    let edges = (0..n).flat_map(|a| (a + 1..n).filter(move |&b| adj[a as usize] >> b & 1 == 1).map(move |b| (a + 1, b + 1)));
    Graph::from_parts(1..=n, edges).unwrap()
}

/// Smallest upper-triangle code over all orderings that list vertices by
/// nondecreasing degree. Isomorphic graphs get equal codes.
pub fn canonical_code(adj: &[u32]) -> u64 {
    let n = adj.len();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| adj[v].count_ones());
    let mut best = u64::MAX;
    let mut order = by_degree.clone();
    permute_classes(adj, &by_degree, 0, &mut order, &mut best);
    best
}

// Permutes each run of equal degree independently.
fn permute_classes(adj: &[u32], sorted: &[usize], from: usize, order: &mut Vec<usize>, best: &mut u64) {
    let n = sorted.len();
    if from == n {
        let mut code = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                code = code << 1 | (adj[order[i]] >> order[j] & 1) as u64;
            }
        }
        *best = (*best).min(code);
        return;
    }
    let deg = adj[sorted[from]].count_ones();
    let to = (from..n).find(|&i| adj[sorted[i]].count_ones() != deg).unwrap_or(n);
    heap_permutations(&mut order[from..to].to_vec(), to - from, &mut |perm| {
        order[from..to].copy_from_slice(perm);
        permute_classes(adj, sorted, to, order, best);
    });
}

fn heap_permutations<F: FnMut(&[usize])>(items: &mut Vec<usize>, k: usize, f: &mut F) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, f);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Attaches `ell` cycles at the lowest vertex `v*`, each through `k + 2`
/// new vertices, and keeps the budget `k`. A cycle through only `k + 1` new
/// vertices could be contracted away within the budget.
pub fn gen_hardness_gadget(g: &Graph, k: i64, ell: u32) -> Result<Instance, GenError> {
    let per_cycle = usize::try_from(k)
        .map_err(|_| GenError::Parameter(format!("negative budget {k}")))?
        + 2;
    gen_hardness_gadget_with(g, k, ell, per_cycle)
}

/// As [`gen_hardness_gadget`] with an explicit number of new vertices per
/// cycle.
pub fn gen_hardness_gadget_with(g: &Graph, k: i64, ell: u32, new_per_cycle: usize) -> Result<Instance, GenError> {
    if !g.is_connected() {
        return Err(GenError::Parameter("base graph must be connected".into()));
    }
    if ell == 0 || new_per_cycle < 2 {
        return Err(GenError::Parameter(format!(
            "need ell >= 1 and at least 2 new vertices per cycle (ell={ell}, per cycle={new_per_cycle})"
        )));
    }
    let hub = g.min_vertex().unwrap();
    let mut next = g.max_vertex().unwrap() + 1;
    let mut h = g.clone();
    for _ in 0..ell {
        let mut prev = hub;
        for _ in 0..new_per_cycle {
            h.add_vertex(next);
            h.add_edge(prev, next).unwrap();
            prev = next;
            next += 1;
        }
        h.add_edge(prev, hub).unwrap();
    }
    Ok(Instance::new(h, k, ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_of_connected_graphs() {
        let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
        assert!(connected_graphs(0).is_err());
    }

    #[test]
    fn enumerated_graphs_are_connected_and_distinct() {
        let gs = connected_graphs(5).unwrap();
        assert!(gs.iter().all(Graph::is_connected));
        let degree_seqs: HashSet<Vec<usize>> = gs
            .iter()
            .map(|g| {
                let mut d: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
                d.sort();
                d
            })
            .collect();
        // 21 classes but only 18 distinct degree sequences
        assert!(degree_seqs.len() <= gs.len());
    }

    #[test]
    fn random_examples() {
        assert_eq!(gen_random_instance(5, 1.0, 0, 0, 7).unwrap().graph, Graph::complete(5));
        assert_eq!(gen_random_instance(2, 1.0, 0, 0, 7).unwrap().graph, Graph::complete(2));
        let a = gen_random_instance(12, 0.3, 2, 1, 99).unwrap();
        let b = gen_random_instance(12, 0.3, 2, 1, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.graph.is_connected());
        assert!(gen_random_instance(5, 0.0, 0, 0, 1).is_err());
        assert!(gen_random_instance(0, 0.5, 0, 0, 1).is_err());
    }

    #[test]
    fn gadget_sizes() {
        let p3 = Graph::path(3);
        let lit = gen_hardness_gadget_with(&p3, 1, 2, 2).unwrap();
        assert_eq!(lit.graph.vertex_count(), 7);
        let lit = gen_hardness_gadget_with(&p3, 1, 1, 2).unwrap();
        assert_eq!(lit.graph.vertex_count(), 5);

        let inst = gen_hardness_gadget(&p3, 1, 2).unwrap();
        assert_eq!(inst.graph.vertex_count(), 3 + 2 * 3);
        assert_eq!(inst.graph.degree(1), p3.degree(1) + 4);
        assert_eq!(inst.k, 1);
        assert!(gen_hardness_gadget(&p3, 1, 0).is_err());
    }

    #[test]
    fn gadget_preserves_answers_on_c4() {
        use crate::oracle::exact_decide;
        let c4 = Graph::cycle(4);
        for k in 0..=2 {
            let tree = exact_decide(&Instance::new(c4.clone(), k, 0)).unwrap();
            let gadget = gen_hardness_gadget(&c4, k, 1).unwrap();
            assert_eq!(exact_decide(&gadget).unwrap(), tree, "k={k}");
        }
        // with only k + 1 new vertices the attached triangle absorbs the budget
        let short = gen_hardness_gadget_with(&c4, 1, 1, 2).unwrap();
        assert!(exact_decide(&short).unwrap());
        assert!(!exact_decide(&Instance::new(c4, 1, 0)).unwrap());
    }
}
