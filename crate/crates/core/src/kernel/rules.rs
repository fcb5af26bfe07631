use std::collections::{BTreeMap, BTreeSet};

use super::Step;
use crate::graph::{contract_edges, Edge, Graph, Vertex};

/// High-degree vertices `H`, vertices `I` outside `H` whose neighbors all
/// lie in `H`, and the rest `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HirPartition {
    pub h: BTreeSet<Vertex>,
    pub i: BTreeSet<Vertex>,
    pub r: BTreeSet<Vertex>,
}

/// Degree threshold for `H`: `2(k+3)(k+2 ell) + 1`.
pub fn high_degree_threshold(k: i64, ell: u32) -> usize {
    let k = k.max(0) as usize;
    2 * (k + 3) * (k + 2 * ell as usize) + 1
}

pub fn partition_hir(g: &Graph, k: i64, ell: u32) -> HirPartition {
    let t = high_degree_threshold(k, ell);
    let h: BTreeSet<Vertex> = g.vertices().filter(|&v| g.degree(v) >= t).collect();
    let mut i = BTreeSet::new();
    let mut r = BTreeSet::new();
    for v in g.vertices().filter(|v| !h.contains(v)) {
        if g.neighbors(v).all(|u| h.contains(&u)) {
            i.insert(v);
        } else {
            r.insert(v);
        }
    }
    HirPartition { h, i, r }
}

/// Deletes the lowest-id vertex of degree 1.
pub fn reduce_leaves(g: &mut Graph) -> Option<Step> {
    let vertex = g.vertices().find(|&v| g.degree(v) == 1)?;
    let neighbor = g.neighbors(vertex).next().unwrap();
    g.remove_vertex(vertex);
    Some(Step::LeafDelete { vertex, neighbor })
}

/// Finds a path `u_0, ..., u_{q+1}` whose `q > k + 2` inner vertices all
/// have degree 2 and contracts `u_{q-1} u_q`.
///
/// Runs of degree-2 vertices are scanned by lowest id. A run is read from
/// its end with the smaller id. When both ends of a run attach to the same
/// vertex the last run vertex serves as `u_{q+1}`. On a cycle the path
/// starts at the lowest vertex and heads to its smaller neighbor, covering
/// all vertices.
pub fn reduce_long_paths(g: &mut Graph, k: i64) -> Option<Step> {
    let need = k.max(0) as usize + 2;
    let deg2: BTreeSet<Vertex> = g.vertices().filter(|&v| g.degree(v) == 2).collect();
    let mut seen = BTreeSet::new();
    let mut found: Option<(Vertex, Vertex)> = None;
    for &start in &deg2 {
        if seen.contains(&start) {
            continue;
        }
        let run = g.reach(start, |v| deg2.contains(&v));
        seen.extend(run.iter().copied());
        if run.len() == g.vertex_count() {
            // the whole graph is a cycle
            let order = cycle_order(g, start);
            let n = order.len();
            if n >= 4 && n - 2 > need {
                found = Some((order[n - 3], order[n - 2]));
                break;
            }
            continue;
        }
        let path = run_order(g, &run, &deg2);
        let r = path.len();
        let first_out = outside_neighbor(g, path[0], &run, None);
        let last_out = outside_neighbor(g, path[r - 1], &run, (r == 1).then_some(first_out));
        let q = if first_out == last_out { r - 1 } else { r };
        if q > need {
            // u_{q-1} u_q, with u_i = path[i - 1]
            found = Some((path[q - 2], path[q - 1]));
            break;
        }
    }
    let (a, b) = found?;
    let edge = Edge::new(a, b);
    let (h, _) = contract_edges(g, &[edge]).ok()?;
    *g = h;
    Some(Step::LongPathContract {
        edge,
        merged: edge.lo(),
    })
}

// The vertices of a cycle graph starting at `start` toward its smaller
// neighbor.
fn cycle_order(g: &Graph, start: Vertex) -> Vec<Vertex> {
    let start = g.min_vertex().unwrap_or(start);
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = g.neighbors(start).min().unwrap();
    while cur != start {
        order.push(cur);
        let next = g.neighbors(cur).find(|&u| u != prev).unwrap();
        prev = cur;
        cur = next;
    }
    order
}

// A run of degree-2 vertices that is not a whole cycle induces a path;
// list it from the end with the smaller id.
fn run_order(g: &Graph, run: &BTreeSet<Vertex>, deg2: &BTreeSet<Vertex>) -> Vec<Vertex> {
    if run.len() == 1 {
        return run.iter().copied().collect();
    }
    let inner_degree = |v: Vertex| g.neighbors(v).filter(|u| run.contains(u) && deg2.contains(u)).count();
    let start = run.iter().copied().filter(|&v| inner_degree(v) == 1).min().unwrap();
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    loop {
        let next = g
            .neighbors(cur)
            .find(|&u| run.contains(&u) && Some(u) != prev && !order.contains(&u));
        match next {
            Some(u) => {
                order.push(u);
                prev = Some(cur);
                cur = u;
            }
            None => return order,
        }
    }
}

// The neighbor of a run end outside the run. For a one-vertex run the two
// outside neighbors are returned in increasing order on successive calls.
fn outside_neighbor(g: &Graph, v: Vertex, run: &BTreeSet<Vertex>, skip: Option<Vertex>) -> Vertex {
    let outs: Vec<Vertex> = g.neighbors(v).filter(|u| !run.contains(u)).collect();
    match skip {
        Some(s) if outs.len() == 2 => outs.into_iter().find(|&u| u != s).unwrap_or(s),
        _ => outs[0],
    }
}

/// Deletes the lowest vertex of `I` that has at least `k + ell + 2` false
/// twins in `I`.
pub fn reduce_false_twins(g: &mut Graph, k: i64, ell: u32) -> Option<Step> {
    let need = k.max(0) as usize + ell as usize + 2;
    let hir = partition_hir(g, k, ell);
    let mut groups: BTreeMap<Vec<Vertex>, Vec<Vertex>> = BTreeMap::new();
    for &v in &hir.i {
        let nb: Vec<Vertex> = g.neighbors(v).collect();
        groups.entry(nb).or_default().push(v);
    }
    let (neighborhood, vertex) = groups
        .into_iter()
        .filter(|(_, members)| members.len() > need)
        .map(|(nb, members)| (nb, members[0]))
        .min_by_key(|&(_, v)| v)?;
    g.remove_vertex(vertex);
    Some(Step::TwinDelete { vertex, neighborhood })
}

/// Finds the lexicographically first `d`-subset of `H` with at least
/// `k + ell + 2` common neighbors in `I`, contracts the edges from the
/// lowest such neighbor to the subset and lowers `k` by `d - 1`.
pub fn reduce_common_neighborhood(g: &mut Graph, k: &mut i64, ell: u32, d: u32) -> Option<Step> {
    let need = (*k).max(0) as usize + ell as usize + 2;
    let hir = partition_hir(g, *k, ell);
    let hubs: Vec<Vertex> = hir.h.iter().copied().collect();
    let candidates: Vec<Vertex> = hir.i.iter().copied().collect();
    let mut chosen = Vec::new();
    let found = search_hubs(g, &hubs, 0, d as usize, need, &candidates, &mut chosen)?;
    let pivot = found.1;
    let hubs = found.0;
    let edges: Vec<Edge> = hubs.iter().map(|&h| Edge::new(pivot, h)).collect();
    let (h, _) = contract_edges(g, &edges).ok()?;
    let merged = hubs.iter().copied().chain([pivot]).min().unwrap();
    *g = h;
    *k -= hubs.len() as i64 - 1;
    Some(Step::CommonNbrContract { pivot, hubs, merged })
}

fn search_hubs(
    g: &Graph,
    hubs: &[Vertex],
    from: usize,
    d: usize,
    need: usize,
    common: &[Vertex],
    chosen: &mut Vec<Vertex>,
) -> Option<(Vec<Vertex>, Vertex)> {
    if common.len() < need {
        return None;
    }
    if chosen.len() == d {
        return Some((chosen.clone(), common[0]));
    }
    for i in from..hubs.len() {
        if hubs.len() - i < d - chosen.len() {
            break;
        }
        let h = hubs[i];
        let next: Vec<Vertex> = common.iter().copied().filter(|&v| g.has_edge(v, h)).collect();
        chosen.push(h);
        let hit = search_hubs(g, hubs, i + 1, d, need, &next, chosen);
        chosen.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[Vertex]) -> BTreeSet<Vertex> {
        v.iter().copied().collect()
    }

    #[test]
    fn hir_examples() {
        let star = Graph::star(12);
        let p = partition_hir(&star, 1, 0);
        assert_eq!(p.h, set(&[1]));
        assert_eq!(p.i.len(), 12);
        assert!(p.r.is_empty());

        let p = partition_hir(&Graph::cycle(5), 1, 0);
        assert!(p.h.is_empty() && p.i.is_empty());
        assert_eq!(p.r.len(), 5);

        let p = partition_hir(&Graph::complete_bipartite(2, 10), 1, 0);
        assert_eq!(p.h, set(&[1, 2]));
        assert_eq!(p.i.len(), 10);
    }

    #[test]
    fn long_path_on_cycles() {
        let mut g = Graph::cycle(10);
        let step = reduce_long_paths(&mut g, 1).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert!(g.is_in_t_ell(1) && !g.is_in_t_ell(0));
        assert!(matches!(step, Step::LongPathContract { .. }));

        let mut g = Graph::cycle(6);
        assert_eq!(reduce_long_paths(&mut g, 4), None);
    }

    #[test]
    fn long_path_fixed_point_on_a_path() {
        // P20 has no degree-1 rule here: its 18 inner vertices form one run
        // between the two leaves, shrinking to k + 2 inner vertices
        let mut g = Graph::path(20);
        while reduce_long_paths(&mut g, 2).is_some() {}
        assert_eq!(g.vertex_count(), 2 + 4);
        assert!(g.is_in_t_ell(0));
    }

    #[test]
    fn long_path_on_pendant_cycle() {
        // triangle 1-2-3 with a pendant cycle 3-4-5-6-7-8-3
        let mut g = Graph::from_edges([
            (1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 3),
        ])
        .unwrap();
        // run 4..8 attaches twice to 3, so q = 4 inner vertices
        assert!(reduce_long_paths(&mut g.clone(), 2).is_none());
        let step = reduce_long_paths(&mut g, 1).unwrap();
        assert_eq!(
            step,
            Step::LongPathContract {
                edge: Edge::new(6, 7),
                merged: 6
            }
        );
    }

    #[test]
    fn twins_examples() {
        let mut g = Graph::star(12);
        let step = reduce_false_twins(&mut g, 1, 0).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(
            step,
            Step::TwinDelete {
                vertex: 2,
                neighborhood: vec![1]
            }
        );

        let mut g = Graph::complete_bipartite(2, 10);
        reduce_false_twins(&mut g, 1, 0).unwrap();
        assert_eq!(g, {
            let mut h = Graph::complete_bipartite(2, 10);
            h.remove_vertex(3);
            h
        });

        assert_eq!(reduce_false_twins(&mut Graph::cycle(5), 1, 0), None);
    }

    #[test]
    fn common_neighborhood_on_k_2_10() {
        let mut g = Graph::complete_bipartite(2, 10);
        let mut k = 1;
        let step = reduce_common_neighborhood(&mut g, &mut k, 0, 2).unwrap();
        assert_eq!(k, 0);
        assert_eq!(
            step,
            Step::CommonNbrContract {
                pivot: 3,
                hubs: vec![1, 2],
                merged: 1
            }
        );
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.degree(1), 9);
        assert!(g.is_in_t_ell(0));

        let mut c5 = Graph::cycle(5);
        assert_eq!(reduce_common_neighborhood(&mut c5, &mut k, 0, 2), None);
    }
}
