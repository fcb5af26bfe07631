mod common;

use proptest::prelude::*;

use tlc_core::generate::gen_random_instance;
use tlc_core::graph::{contract_edges, Edge, Graph};
use tlc_core::kernel::{kernelize, lift_solution, reduce_long_paths, Alpha, Outcome};
use tlc_core::oracle::{all_minimum_solutions, exact_opt};
use tlc_core::witness::{capped_value, quotient, witness_from_solution};
use tlc_core::Instance;

use common::solution_works;

fn graph_and_subset() -> impl Strategy<Value = (Graph, Vec<Edge>, Vec<usize>)> {
    (2usize..=9, 0.2f64..0.9, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let g = gen_random_instance(n, p, 0, 0, seed).unwrap().graph;
        let edges = g.edge_vec();
        let m = edges.len();
        (
            Just(g),
            proptest::sample::subsequence(edges, 0..=m),
            Just((0..m).collect::<Vec<usize>>()).prop_shuffle(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn contraction_is_order_independent((g, f, order) in graph_and_subset()) {
        let (at_once, _) = contract_edges(&g, &f).unwrap();
        // one edge at a time, in a shuffled order, renaming through the merge maps
        let mut cur = g.clone();
        let mut names: std::collections::BTreeMap<u32, u32> = g.vertices().map(|v| (v, v)).collect();
        for &i in order.iter().filter(|&&i| i < f.len()) {
            let (a, b) = f[i].endpoints();
            let (a, b) = (names[&a], names[&b]);
            if a == b {
                continue;
            }
            let (next, map) = contract_edges(&cur, &[Edge::new(a, b)]).unwrap();
            for v in names.values_mut() {
                *v = map.get(*v).unwrap();
            }
            cur = next;
        }
        prop_assert_eq!(&cur, &at_once);
        let w = witness_from_solution(&g, &f);
        prop_assert_eq!(quotient(&g, &w).unwrap(), at_once);
    }

    #[test]
    fn lifted_solutions_verify(n in 3usize..=12, p in 0.15f64..0.6, k in 1i64..=3, ell in 0u32..=2, seed in any::<u64>(), half in any::<bool>()) {
        let inst = gen_random_instance(n, p, k, ell, seed).unwrap();
        let alpha = if half { Alpha::new(3, 2).unwrap() } else { Alpha::integer(2).unwrap() };
        let out = kernelize(&inst, alpha);
        let reduced = &out.instance.graph;
        let f = if out.trace.outcome == Outcome::DecidedNo {
            Vec::new()
        } else {
            exact_opt(reduced, ell, out.instance.k.max(0)).unwrap().map(|(f, _)| f).unwrap_or_else(|| reduced.spanning_forest())
        };
        let lifted = lift_solution(&inst, &out.trace, &f).unwrap();
        // either a solution within the budget or the capped marker
        if lifted.len() as i64 <= k {
            prop_assert!(solution_works(&inst.graph, &lifted, ell, k));
        } else {
            prop_assert_eq!(capped_value(lifted.len(), k), k + 1);
        }
    }
}

/// Replaces the edge `1-2` of `g` by a path through `extra` new vertices.
fn with_long_path(g: &Graph, extra: u32) -> Graph {
    let mut h = g.clone();
    let mut cur = Edge::new(1, 2);
    for j in 0..extra {
        h.subdivide_edge(cur, 50 + j).unwrap();
        cur = Edge::new(50 + j, 2);
    }
    h
}

#[test]
fn some_minimum_solution_avoids_long_path_interiors() {
    let bases = [Graph::complete(4), Graph::cycle(3), Graph::cycle(5), Graph::complete(5)];
    let mut checked = 0;
    for base in &bases {
        for k in 1..=2i64 {
            for extra in (k as u32 + 3)..=(k as u32 + 5) {
                let g = with_long_path(base, extra);
                for ell in 0..=3 {
                    let sols = all_minimum_solutions(&g, ell, k).unwrap();
                    if sols.is_empty() {
                        continue;
                    }
                    let inner: Vec<u32> = (50..50 + extra).collect();
                    let avoids = |f: &Vec<Edge>| f.iter().all(|e| !inner.contains(&e.lo()) && !inner.contains(&e.hi()));
                    assert!(sols.iter().any(avoids), "k={k} ell={ell} extra={extra}");
                    // and the rule indeed fires here
                    assert!(reduce_long_paths(&mut g.clone(), k).is_some());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn long_path_rule_preserves_optimum_values() {
    for extra in 4..=8 {
        let g = with_long_path(&Graph::complete(4), extra);
        for ell in 0..=3 {
            let inst = Instance::new(g.clone(), 1, ell);
            let mut h = g.clone();
            if reduce_long_paths(&mut h, inst.k).is_none() {
                continue;
            }
            // values capped at k + 1 = 2
            let capped = |g: &Graph| exact_opt(g, ell, 2).unwrap().map_or(2, |(_, s)| s);
            assert_eq!(capped(&g), capped(&h), "extra={extra} ell={ell}");
        }
    }
}
