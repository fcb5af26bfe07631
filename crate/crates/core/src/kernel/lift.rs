use std::collections::BTreeSet;

use super::{replay, KernelError, KernelTrace, Outcome, Step};
use crate::graph::{Edge, Graph, Vertex};
use crate::witness::{verify_solution, verify_witness, witness_from_solution, WitnessStructure};
use crate::Instance;

/// Maps a solution of the reduced instance back to `original`.
///
/// Returns all edges of `original` when the trace decided no, or when
/// `f_reduced` exceeds the reduced budget. Each step is undone on the
/// witness structure: deleted vertices come back as singletons, a
/// long-path contraction is split again without extra cost whenever that
/// keeps the quotient in the class, and a common-neighborhood contraction
/// puts the pivot and hubs into the merged vertex's bag.
pub fn lift_solution(
    original: &Instance,
    trace: &KernelTrace,
    f_reduced: &[Edge],
) -> Result<Vec<Edge>, KernelError> {
    let stages = replay(original, trace)?;
    let everything = original.graph.edge_vec();
    if trace.outcome == Outcome::DecidedNo {
        return Ok(everything);
    }
    let (reduced, k_reduced) = stages.last().unwrap();
    if let Some(e) = f_reduced.iter().find(|e| !reduced.contains_edge(**e)) {
        return Err(KernelError::ForeignEdge(*e));
    }
    let verdict = verify_solution(reduced, f_reduced, trace.ell, i64::MAX);
    if !verdict.is_valid() {
        return Err(KernelError::NotASolution);
    }
    if f_reduced.len() as i64 > *k_reduced {
        return Ok(everything);
    }
    let ell = trace.ell;
    let mut w = witness_from_solution(reduced, f_reduced);
    for (step, (g, _)) in trace.steps.iter().zip(&stages).rev() {
        w = match lift_step(g, step, &w, ell) {
            Some(next) => next,
            None => return Ok(everything),
        };
    }
    let f = w.solution_edges(&original.graph);
    if !verify_solution(&original.graph, &f, ell, i64::MAX).is_valid() {
        return Ok(everything);
    }
    Ok(f)
}

// First candidate witness structure on `g` that is valid, in order of cost.
fn lift_step(g: &Graph, step: &Step, w: &WitnessStructure, ell: u32) -> Option<WitnessStructure> {
    let bags = w.bags();
    let holding = |v: Vertex| bags.iter().position(|b| b.contains(&v)).unwrap();
    let with = |idx: usize, replacement: Vec<BTreeSet<Vertex>>| {
        let mut out: Vec<BTreeSet<Vertex>> = bags
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, b)| b.clone())
            .collect();
        out.extend(replacement);
        WitnessStructure::new(out)
    };
    let candidates: Vec<WitnessStructure> = match step {
        Step::LeafDelete { vertex, .. } | Step::TwinDelete { vertex, .. } => {
            let mut out = bags.to_vec();
            out.push(BTreeSet::from([*vertex]));
            let mut cands = vec![WitnessStructure::new(out)];
            // fallbacks in case the singleton does not keep the quotient in the class
            for u in g.neighbors(*vertex) {
                let idx = holding(u);
                let mut bag = bags[idx].clone();
                bag.insert(*vertex);
                cands.push(with(idx, vec![bag]));
            }
            cands
        }
        Step::LongPathContract { edge, merged } => {
            let (a, b) = edge.endpoints();
            let idx = holding(*merged);
            let rest: BTreeSet<Vertex> = bags[idx].iter().copied().filter(|&v| v != *merged).collect();
            let join = |extra: &[Vertex]| {
                let mut bag = rest.clone();
                bag.extend(extra.iter().copied());
                bag
            };
            let single = |v: Vertex| BTreeSet::from([v]);
            let mut cands = Vec::new();
            if rest.is_empty() {
                cands.push(with(idx, vec![single(a), single(b)]));
            } else {
                cands.push(with(idx, vec![join(&[a]), single(b)]));
                cands.push(with(idx, vec![join(&[b]), single(a)]));
            }
            cands.push(with(idx, vec![join(&[a, b])]));
            cands
        }
        Step::CommonNbrContract { pivot, hubs, merged } => {
            let idx = holding(*merged);
            let mut bag: BTreeSet<Vertex> = bags[idx].iter().copied().filter(|&v| v != *merged).collect();
            bag.insert(*pivot);
            bag.extend(hubs.iter().copied());
            vec![with(idx, vec![bag])]
        }
    };
    candidates
        .into_iter()
        .find(|c| verify_witness(g, c, ell, i64::MAX).is_valid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kernelize, Alpha};
    use crate::oracle::exact_opt;

    fn two() -> Alpha {
        Alpha::integer(2).unwrap()
    }

    #[test]
    fn empty_trace_is_identity() {
        let inst = Instance::new(Graph::cycle(5), 3, 0);
        let out = kernelize(&inst, two());
        assert!(out.trace.steps.is_empty());
        let f = vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(3, 4)];
        assert_eq!(lift_solution(&inst, &out.trace, &f).unwrap(), f);
    }

    #[test]
    fn common_neighborhood_lifts_to_its_edges() {
        let g = Graph::complete_bipartite(2, 10);
        let inst = Instance::new(g, 1, 0);
        let trace = KernelTrace {
            k: 1,
            ell: 0,
            alpha: two(),
            steps: vec![Step::CommonNbrContract {
                pivot: 3,
                hubs: vec![1, 2],
                merged: 1,
            }],
            outcome: Outcome::DecidedYes,
        };
        let f = lift_solution(&inst, &trace, &[]).unwrap();
        assert_eq!(f, vec![Edge::new(1, 3), Edge::new(2, 3)]);
    }

    #[test]
    fn over_budget_lifts_to_everything() {
        let inst = Instance::new(Graph::cycle(5), 1, 0);
        let out = kernelize(&inst, two());
        let f = vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(3, 4)];
        let lifted = lift_solution(&inst, &out.trace, &f).unwrap();
        assert_eq!(lifted.len(), 5);
    }

    #[test]
    fn subdivided_k4_lifts_optimally() {
        // K4 with the edge 1-2 replaced by a path through 5..=14
        let mut edges = vec![(1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (1, 5), (14, 2)];
        edges.extend((5..14).map(|v| (v, v + 1)));
        let inst = Instance::new(Graph::from_edges(edges).unwrap(), 1, 2);
        let out = kernelize(&inst, two());
        assert!(out.instance.graph.vertex_count() < inst.graph.vertex_count());
        let (f, size) = exact_opt(&out.instance.graph, 2, out.instance.k).unwrap().unwrap();
        assert_eq!(size, 1);
        let lifted = lift_solution(&inst, &out.trace, &f).unwrap();
        assert_eq!(lifted.len(), 1);
        assert!(verify_solution(&inst.graph, &lifted, 2, 1).is_valid());
    }

    #[test]
    fn rejects_bad_reduced_solutions() {
        let inst = Instance::new(Graph::cycle(5), 3, 0);
        let out = kernelize(&inst, two());
        assert_eq!(
            lift_solution(&inst, &out.trace, &[Edge::new(1, 3)]),
            Err(KernelError::ForeignEdge(Edge::new(1, 3)))
        );
        assert_eq!(
            lift_solution(&inst, &out.trace, &[Edge::new(1, 2)]),
            Err(KernelError::NotASolution)
        );
    }
}
