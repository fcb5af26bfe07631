//! Exhaustive search for minimum contraction sets. Deliberately simple: it
//! is the reference every other solver is checked against.

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::Instance;

/// Largest number of candidate edge sets, `sum_{j <= budget} C(|E|, j)`,
/// the oracle will enumerate.
pub const MAX_SUBSETS: u64 = 1 << 23;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle refuses {edges} edges with budget {budget} (more than {MAX_SUBSETS} candidate sets)")]
    TooLarge { edges: usize, budget: usize },
}

/// Minimum `F` with `g/F` in `T_ell` and `|F| <= k_max`. Sizes are tried in
/// increasing order and subsets of one size in lexicographic edge order, so
/// the answer is the first such set in that order.
///
/// A budget above `|V| - 1` is clamped: contracting a spanning tree always
/// works. Disconnected graphs have no solution.
pub fn exact_opt(g: &Graph, ell: u32, k_max: i64) -> Result<Option<(Vec<Edge>, usize)>, OracleError> {
    let mut found = None;
    search(g, ell, k_max, |f| {
        found = Some(f.to_vec());
        false
    })?;
    Ok(found.map(|f| {
        let n = f.len();
        (f, n)
    }))
}

/// All solutions of the minimum size, in lexicographic order.
pub fn all_minimum_solutions(g: &Graph, ell: u32, k_max: i64) -> Result<Vec<Vec<Edge>>, OracleError> {
    let mut out: Vec<Vec<Edge>> = Vec::new();
    search(g, ell, k_max, |f| {
        if out.first().is_some_and(|first| first.len() < f.len()) {
            return false;
        }
        out.push(f.to_vec());
        true
    })?;
    Ok(out)
}

/// `true` iff `k >= 0` and some `F` with `|F| <= k` works.
pub fn exact_decide(inst: &Instance) -> Result<bool, OracleError> {
    if inst.k < 0 {
        return Ok(false);
    }
    Ok(exact_opt(&inst.graph, inst.ell, inst.k)?.is_some())
}

/// Calls `visit` on each solution in search order until it returns false.
fn search<V>(g: &Graph, ell: u32, k_max: i64, mut visit: V) -> Result<(), OracleError>
where
    V: FnMut(&[Edge]) -> bool,
{
    if k_max < 0 || !g.is_connected() {
        return Ok(());
    }
    let n = g.vertex_count();
    let budget = (k_max as usize).min(n.saturating_sub(1));
    let edges = g.edge_vec();
    if candidate_sets(edges.len(), budget) > MAX_SUBSETS {
        return Err(OracleError::TooLarge {
            edges: edges.len(),
            budget,
        });
    }
    let ids: Vec<Vertex> = g.vertices().collect();
    let pairs: Vec<(usize, usize)> = edges
        .iter()
        .map(|e| {
            (
                ids.binary_search(&e.lo()).unwrap(),
                ids.binary_search(&e.hi()).unwrap(),
            )
        })
        .collect();
    let mut chosen = Vec::new();
    let mut sol = Vec::new();
    let mut stop = false;
    for size in 0..=budget {
        combos(pairs.len(), size, 0, &mut chosen, &mut |idx| {
            if stop {
                return;
            }
            if contracts_into_class(n, &pairs, idx, ell) {
                sol.clear();
                sol.extend(idx.iter().map(|&i| edges[i]));
                if !visit(&sol) {
                    stop = true;
                }
            }
        });
        if stop {
            break;
        }
    }
    Ok(())
}

fn candidate_sets(m: usize, budget: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for j in 0..=budget.min(m) {
        total = total.saturating_add(c);
        c = c.saturating_mul((m - j) as u64) / (j as u64 + 1);
    }
    total
}

fn combos<F: FnMut(&[usize])>(m: usize, size: usize, from: usize, chosen: &mut Vec<usize>, f: &mut F) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    let need = size - chosen.len();
    for i in from..m {
        if m - i < need {
            break;
        }
        chosen.push(i);
        combos(m, size, i + 1, chosen, f);
        chosen.pop();
    }
}

// Union-find quotient of a connected graph: connected, so only the edge
// count matters.
fn contracts_into_class(n: usize, pairs: &[(usize, usize)], idx: &[usize], ell: u32) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut groups = n;
    for &i in idx {
        let (a, b) = pairs[i];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
            groups -= 1;
        }
    }
    let mut qedges: Vec<(usize, usize)> = pairs
        .iter()
        .filter_map(|&(a, b)| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            (ra != rb).then(|| (ra.min(rb), ra.max(rb)))
        })
        .collect();
    qedges.sort_unstable();
    qedges.dedup();
    qedges.len() < groups + ell as usize
}
