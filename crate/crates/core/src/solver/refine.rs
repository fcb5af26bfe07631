use std::collections::BTreeSet;

use crate::graph::{bits, Coloring, DenseGraph, Graph, Vertex};
use crate::witness::WitnessStructure;

/// How a monochromatic component is turned into bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentCase {
    /// One bag for the whole component.
    ContractAll(BTreeSet<Vertex>),
    /// One singleton bag per vertex.
    AllSingletons(BTreeSet<Vertex>),
    /// A minimum shatter: connected core containing the boundary, the rest
    /// as singletons.
    ShatterCase {
        component: BTreeSet<Vertex>,
        boundary: BTreeSet<Vertex>,
    },
}

impl ComponentCase {
    pub fn tag(&self) -> CaseTag {
        match self {
            ComponentCase::ContractAll(_) => CaseTag::ContractAll,
            ComponentCase::AllSingletons(_) => CaseTag::AllSingletons,
            ComponentCase::ShatterCase { .. } => CaseTag::ShatterCase,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    ContractAll,
    AllSingletons,
    ShatterCase,
}

/// Maximal connected single-colored vertex sets, ordered by smallest vertex.
pub fn monochromatic_components(g: &Graph, c: &Coloring) -> Vec<BTreeSet<Vertex>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in g.vertices() {
        if seen.contains(&v) {
            continue;
        }
        let col = c.color(v);
        let comp = g.reach(v, |u| c.color(u) == col);
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

/// Case of the monochromatic component `x` of `c`.
///
/// A component is path shaped when it has at least two vertices, induces a
/// path, and its inner vertices have degree 2 in `g`. Path-shaped components
/// whose two ends touch a common other component are contracted whole; other
/// path-shaped components stay singletons; everything else is shattered.
pub fn classify_component(g: &Graph, c: &Coloring, x: &BTreeSet<Vertex>) -> ComponentCase {
    let d = DenseGraph::new(g).expect("classification is limited to 64 vertices");
    let colors = dense_colors(&d, c);
    let comps = Components::new(&d, &colors);
    let xm = to_mask(&d, x);
    let tag = classify_dense(&d, &comps, xm);
    case_from(g, x, tag)
}

/// Turns a coloring of `g` into a witness structure of cost at most `k`
/// whose quotient lies in `T_ell`, if the component rules allow one.
pub fn refine_coloring(
    g: &Graph,
    c: &Coloring,
    k: i64,
    ell: u32,
) -> Option<(WitnessStructure, usize)> {
    refine_with_cases(g, c, k, ell, |_, natural| natural)
}

/// [`refine_coloring`] with a hook that may replace the case chosen for
/// each component of size at least two.
pub fn refine_with_cases<F>(
    g: &Graph,
    c: &Coloring,
    k: i64,
    ell: u32,
    mut choose: F,
) -> Option<(WitnessStructure, usize)>
where
    F: FnMut(&BTreeSet<Vertex>, CaseTag) -> CaseTag,
{
    let d = DenseGraph::new(g).expect("refinement is limited to 64 vertices");
    let colors = dense_colors(&d, c);
    let bags = refine_dense_with(&d, &colors, k, ell, &mut |xm, tag| {
        choose(&from_mask(&d, xm), tag)
    })?;
    let w = WitnessStructure::new(bags.iter().map(|&m| from_mask(&d, m)).collect());
    let cost = w.cost();
    Some((w, cost))
}

pub(crate) fn refine_dense(d: &DenseGraph, colors: &[u8], k: i64, ell: u32) -> Option<Vec<u64>> {
    refine_dense_with(d, colors, k, ell, &mut |_, tag| tag)
}

fn refine_dense_with(
    d: &DenseGraph,
    colors: &[u8],
    k: i64,
    ell: u32,
    choose: &mut dyn FnMut(u64, CaseTag) -> CaseTag,
) -> Option<Vec<u64>> {
    if k < 0 {
        return None;
    }
    let comps = Components::new(d, colors);
    let mut remaining = k;
    let mut bags: Vec<u64> = Vec::with_capacity(d.n());
    let mut shatter: Vec<u64> = Vec::new();
    for &xm in &comps.masks {
        if xm.count_ones() == 1 {
            bags.push(xm);
            continue;
        }
        match choose(xm, classify_dense(d, &comps, xm)) {
            CaseTag::ContractAll => {
                remaining -= xm.count_ones() as i64 - 1;
                if remaining < 0 {
                    return None;
                }
                bags.push(xm);
            }
            CaseTag::AllSingletons => bags.extend(bits(xm).map(|i| 1u64 << i)),
            CaseTag::ShatterCase => shatter.push(xm),
        }
    }
    for xm in shatter {
        let core = shatter_core(d, xm, remaining as usize + 1)?;
        remaining -= core.count_ones() as i64 - 1;
        bags.push(core);
        bags.extend(bits(xm & !core).map(|i| 1u64 << i));
    }
    quotient_in_class(d, &bags, ell).then_some(bags)
}

// Minimum connected cover of G[x] containing the boundary of x, with at
// most `budget` vertices, as a mask over `d`.
pub(crate) fn shatter_core(d: &DenseGraph, xm: u64, budget: usize) -> Option<u64> {
    let members: Vec<usize> = bits(xm).collect();
    let local: Vec<u64> = members
        .iter()
        .map(|&v| {
            bits(d.adj[v] & xm)
                .map(|u| 1u64 << members.binary_search(&u).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    let mut required = 0u64;
    for (i, &v) in members.iter().enumerate() {
        if d.adj[v] & !xm != 0 {
            required |= 1 << i;
        }
    }
    let core = crate::cvc::cvc_dense_required(&local, required, budget)?;
    Some(bits(core).map(|i| 1u64 << members[i]).fold(0, |a, b| a | b))
}

fn quotient_in_class(d: &DenseGraph, bags: &[u64], ell: u32) -> bool {
    let mut bag_of = vec![0usize; d.n()];
    for (b, &m) in bags.iter().enumerate() {
        for v in bits(m) {
            bag_of[v] = b;
        }
    }
    let mut edges = 0usize;
    let mut nb = vec![0u128; bags.len()];
    for v in 0..d.n() {
        for u in bits(d.adj[v]) {
            let (a, b) = (bag_of[v], bag_of[u]);
            if a < b && nb[a] >> b & 1 == 0 {
                nb[a] |= 1u128 << b;
                edges += 1;
            }
        }
    }
    edges < bags.len() + ell as usize
}

pub(crate) struct Components {
    pub masks: Vec<u64>,
    pub comp_of: Vec<usize>,
}

impl Components {
    pub fn new(d: &DenseGraph, colors: &[u8]) -> Components {
        let n = d.n();
        let mut class = [0u64; 256];
        for (v, &c) in colors.iter().enumerate() {
            class[c as usize] |= 1 << v;
        }
        let mut masks = Vec::new();
        let mut comp_of = vec![usize::MAX; n];
        for v in 0..n {
            if comp_of[v] != usize::MAX {
                continue;
            }
            let m = d.reach(v, class[colors[v] as usize]);
            for u in bits(m) {
                comp_of[u] = masks.len();
            }
            masks.push(m);
        }
        Components { masks, comp_of }
    }
}

pub(crate) fn classify_dense(d: &DenseGraph, comps: &Components, xm: u64) -> CaseTag {
    let size = xm.count_ones();
    if size < 2 {
        return CaseTag::AllSingletons;
    }
    let mut ends = Vec::with_capacity(2);
    let mut inner_edges = 0;
    for v in bits(xm) {
        let deg_in = (d.adj[v] & xm).count_ones();
        inner_edges += deg_in;
        match deg_in {
            1 => ends.push(v),
            2 if d.degree(v) == 2 => {}
            _ => return CaseTag::ShatterCase,
        }
    }
    if ends.len() != 2 || inner_edges / 2 != size - 1 {
        return CaseTag::ShatterCase;
    }
    let touching = |v: usize| -> u128 {
        bits(d.adj[v] & !xm)
            .map(|u| 1u128 << comps.comp_of[u])
            .fold(0, |a, b| a | b)
    };
    if touching(ends[0]) & touching(ends[1]) != 0 {
        CaseTag::ContractAll
    } else {
        CaseTag::AllSingletons
    }
}

fn case_from(g: &Graph, x: &BTreeSet<Vertex>, tag: CaseTag) -> ComponentCase {
    match tag {
        CaseTag::ContractAll => ComponentCase::ContractAll(x.clone()),
        CaseTag::AllSingletons => ComponentCase::AllSingletons(x.clone()),
        CaseTag::ShatterCase => ComponentCase::ShatterCase {
            component: x.clone(),
            boundary: crate::cvc::boundary(g, x),
        },
    }
}

pub(crate) fn dense_colors(d: &DenseGraph, c: &Coloring) -> Vec<u8> {
    d.ids
        .iter()
        .map(|&v| {
            let col = c.color(v).expect("coloring must be total");
            u8::try_from(col).expect("at most 256 colors")
        })
        .collect()
}

fn to_mask(d: &DenseGraph, x: &BTreeSet<Vertex>) -> u64 {
    x.iter()
        .map(|v| 1u64 << d.ids.binary_search(v).expect("vertex of the graph"))
        .fold(0, |a, b| a | b)
}

pub(crate) fn from_mask(d: &DenseGraph, m: u64) -> BTreeSet<Vertex> {
    bits(m).map(|i| d.ids[i]).collect()
}
