//! Color-coding solver for `T_ell`-Contraction.
//!
//! General graphs are reduced to 2-connected pieces by leaf deletion and
//! cut-vertex splitting. A 2-connected graph is solved by trying colorings
//! of its vertices and refining each coloring into a witness structure.

mod refine;

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::derand::{self, DerandError, FunctionFamily};
use crate::graph::{color_budget, DenseGraph, Edge, Graph, Vertex};
use crate::witness::{verify_solution, ContractionSolution};
use crate::Instance;

pub use refine::{
    classify_component, monochromatic_components, refine_coloring, refine_with_cases, CaseTag,
    ComponentCase,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("graph has {0} vertices; the coloring solver handles at most 64")]
    TooLarge(usize),
    #[error("family covers {family} elements but the graph has {graph} vertices")]
    FamilyTooSmall { family: usize, graph: usize },
    #[error(transparent)]
    Family(#[from] DerandError),
    #[error("internal error: produced solution does not verify")]
    Unverified,
}

/// Where colorings come from.
#[derive(Clone, Copy, Debug)]
pub enum Mode<'a> {
    /// Every partition of the vertices into at most `q` color classes, in
    /// lexicographic order of restricted growth strings.
    Exhaustive,
    /// Uniform random colorings. Without `iters` the count is
    /// `min(q^(6k + 8 ell), 10 q^n)`.
    Random { seed: u64, iters: Option<u64> },
    /// The members of a given family, restricted to the first `|V|`
    /// elements.
    Family(&'a FunctionFamily),
    /// A universal family built on demand for `min(6k + 8 ell, |V|)`-subsets.
    Derandomized,
}

impl Mode<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Random { .. } => "rand",
            Mode::Family(_) => "family",
            Mode::Derandomized => "derand",
        }
    }
}

/// `6k + 8 ell`, the number of vertices a compatible coloring must fix.
pub fn relevant_vertices(k: i64, ell: u32) -> u64 {
    6 * k.max(0) as u64 + 8 * ell as u64
}

/// Default number of random colorings.
pub fn default_iterations(n: usize, k: i64, ell: u32) -> u64 {
    let q = color_budget(ell) as u64;
    let full = q.checked_pow(relevant_vertices(k, ell).min(u32::MAX as u64) as u32);
    let cap = q.checked_pow(n as u32).map(|x| x.saturating_mul(10));
    match (full, cap) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => u64::MAX,
    }
}

/// Solves one instance. Returned solutions always verify against the
/// instance; `None` means no solution was found, which is a proof of
/// absence only for the exhaustive and derandomized modes.
pub fn solve(inst: &Instance, mode: Mode<'_>) -> Result<Option<ContractionSolution>, SolveError> {
    Solver::new(mode).solve(inst)
}

/// Solves a 2-connected instance with colorings from `mode`.
pub fn solve_2connected(
    g: &Graph,
    k: i64,
    ell: u32,
    mode: Mode<'_>,
) -> Result<Option<ContractionSolution>, SolveError> {
    if !g.is_two_connected() {
        return Err(SolveError::NotTwoConnected);
    }
    let mut s = Solver::new(mode);
    let found = s.two_connected(g, k, ell)?;
    s.finish(g, k, ell, found)
}

/// Solver state that may be reused across instances: memoized subproblems,
/// the random generator and built families.
pub struct Solver<'a> {
    mode: Mode<'a>,
    rng: ChaCha8Rng,
    memo: HashMap<(Graph, i64, u32), Option<Vec<Edge>>>,
    families: HashMap<(usize, usize, u32), FunctionFamily>,
    /// Colorings refined so far.
    pub colorings_tried: u64,
}

impl<'a> Solver<'a> {
    pub fn new(mode: Mode<'a>) -> Solver<'a> {
        let seed = match mode {
            Mode::Random { seed, .. } => seed,
            _ => 0,
        };
        Solver {
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
            memo: HashMap::new(),
            families: HashMap::new(),
            colorings_tried: 0,
        }
    }

    pub fn solve(&mut self, inst: &Instance) -> Result<Option<ContractionSolution>, SolveError> {
        let found = self.rec(&inst.graph, inst.k, inst.ell)?;
        self.finish(&inst.graph, inst.k, inst.ell, found)
    }

    fn finish(
        &self,
        g: &Graph,
        k: i64,
        ell: u32,
        found: Option<Vec<Edge>>,
    ) -> Result<Option<ContractionSolution>, SolveError> {
        let Some(f) = found else { return Ok(None) };
        let sol = ContractionSolution::new(f, k);
        if !verify_solution(g, &sol.edges, ell, k).is_valid() {
            return Err(SolveError::Unverified);
        }
        Ok(Some(sol))
    }

    fn rec(&mut self, g: &Graph, k: i64, ell: u32) -> Result<Option<Vec<Edge>>, SolveError> {
        if k < 0 || !g.is_connected() {
            return Ok(None);
        }
        if g.is_in_t_ell(ell) {
            return Ok(Some(Vec::new()));
        }
        if k == 0 {
            return Ok(None);
        }
        let key = (g.clone(), k, ell);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = self.rec_uncached(g, k, ell)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn rec_uncached(&mut self, g: &Graph, k: i64, ell: u32) -> Result<Option<Vec<Edge>>, SolveError> {
        // a solution for a smaller excess also works here
        for smaller in 0..ell {
            if let Some(f) = self.rec(g, k, smaller)? {
                return Ok(Some(f));
            }
        }
        if g.vertices().any(|v| g.degree(v) == 1) {
            return self.rec(&strip_leaves(g), k, ell);
        }
        if let Some(&v) = g.cut_vertices().iter().next() {
            return self.split_at(g, v, k, ell);
        }
        self.two_connected(g, k, ell)
    }

    fn split_at(&mut self, g: &Graph, v: Vertex, k: i64, ell: u32) -> Result<Option<Vec<Edge>>, SolveError> {
        let first = g.vertices().find(|&u| u != v).unwrap();
        let c1 = g.reach(first, |u| u != v);
        let mut side1 = c1.clone();
        side1.insert(v);
        let g1 = g.induced_subgraph(&side1);
        let g2 = g.without_vertices(&c1);

        for ell1 in 1..ell {
            for k1 in 0..=k {
                let Some(f1) = self.rec(&g1, k1, ell1)? else { continue };
                if let Some(f2) = self.rec(&g2, k - k1, ell - ell1)? {
                    return Ok(Some(join(f1, f2)));
                }
            }
        }
        if let Some((k1, f1)) = self.tree_optimum(&g1, k)? {
            if let Some(f2) = self.rec(&g2, k - k1, ell)? {
                return Ok(Some(join(f1, f2)));
            }
        }
        if let Some((k2, f2)) = self.tree_optimum(&g2, k)? {
            if let Some(f1) = self.rec(&g1, k - k2, ell)? {
                return Ok(Some(join(f1, f2)));
            }
        }
        Ok(None)
    }

    // Smallest budget within `k_max` at which `g` contracts to a tree.
    fn tree_optimum(&mut self, g: &Graph, k_max: i64) -> Result<Option<(i64, Vec<Edge>)>, SolveError> {
        for j in 0..=k_max {
            if let Some(f) = self.rec(g, j, 0)? {
                return Ok(Some((j, f)));
            }
        }
        Ok(None)
    }

    fn two_connected(&mut self, g: &Graph, k: i64, ell: u32) -> Result<Option<Vec<Edge>>, SolveError> {
        if k < 0 {
            return Ok(None);
        }
        if g.is_in_t_ell(ell) {
            return Ok(Some(Vec::new()));
        }
        let n = g.vertex_count();
        if k == 0 || n < 2 {
            return Ok(None);
        }
        // contracting all but one edge of a spanning tree leaves K2
        if k >= n as i64 - 2 {
            return Ok(Some(spanning_tree_minus_leaf(g)));
        }
        let d = DenseGraph::new(g).map_err(|_| SolveError::TooLarge(n))?;
        let q = (color_budget(ell) as usize).min(n);
        let mut found: Option<Vec<u64>> = None;
        let mut tried = 0u64;
        let mut attempt = |colors: &[u8]| -> bool {
            tried += 1;
            found = refine::refine_dense(&d, colors, k, ell);
            found.is_some()
        };
        match self.mode {
            Mode::Exhaustive => {
                for_each_rgs(n, q, &mut attempt);
            }
            Mode::Random { iters, .. } => {
                let iters = iters.unwrap_or_else(|| default_iterations(n, k, ell));
                let mut colors = vec![0u8; n];
                for _ in 0..iters {
                    for c in colors.iter_mut() {
                        *c = self.rng.gen_range(0..q) as u8;
                    }
                    if attempt(&colors) {
                        break;
                    }
                }
            }
            Mode::Family(fam) => run_family(fam, n, &mut attempt)?,
            Mode::Derandomized => {
                let s = (relevant_vertices(k, ell) as usize).min(n);
                if s >= n {
                    for_each_rgs(n, q, &mut attempt);
                } else {
                    let key = (n, s, q as u32);
                    if let std::collections::hash_map::Entry::Vacant(e) = self.families.entry(key) {
                        let fam = build_family(n, s, q as u32)?;
                        e.insert(fam);
                    }
                    run_family(&self.families[&key], n, &mut attempt)?;
                }
            }
        }
        self.colorings_tried += tried;
        Ok(found.map(|bags| {
            let mut f = Vec::new();
            for m in bags {
                let bag = refine::from_mask(&d, m);
                f.extend(crate::witness::WitnessStructure::new(vec![bag]).solution_edges(g));
            }
            f
        }))
    }
}

/// A `(n, s, q)`-universal family: all functions when `s >= n`, greedy
/// when the constraint table fits, otherwise the three-level composition.
pub fn build_family(n: usize, s: usize, q: u32) -> Result<FunctionFamily, DerandError> {
    if s >= n {
        return derand::all_functions(n, q);
    }
    let table = derand::binomial(n as u64, s as u64).saturating_mul((q as u64).saturating_pow(s as u32));
    if table <= derand::CONSTRAINT_CAP {
        derand::build_universal_greedy(n, s, q)
    } else {
        derand::compose_universal(n, s, q)
    }
}

fn run_family<F: FnMut(&[u8]) -> bool>(
    fam: &FunctionFamily,
    n: usize,
    attempt: &mut F,
) -> Result<(), SolveError> {
    if fam.n < n {
        return Err(SolveError::FamilyTooSmall {
            family: fam.n,
            graph: n,
        });
    }
    // colorings that induce the same partition behave identically
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    for f in fam.iter() {
        let canon = canonical_partition(&f[..n]);
        if seen.insert(canon.clone()) && attempt(&canon) {
            break;
        }
    }
    Ok(())
}

/// Relabels colors in order of first appearance.
pub fn canonical_partition(colors: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    colors
        .iter()
        .map(|&c| {
            if map[c as usize] == u8::MAX {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

/// Restricted growth strings of length `n` with values below `q`, in
/// lexicographic order, until `f` returns true.
pub fn for_each_rgs<F: FnMut(&[u8]) -> bool>(n: usize, q: usize, f: &mut F) -> bool {
    fn rec<F: FnMut(&[u8]) -> bool>(a: &mut Vec<u8>, n: usize, q: usize, top: usize, f: &mut F) -> bool {
        if a.len() == n {
            return f(a);
        }
        let limit = (top + 1).min(q);
        for c in 0..limit {
            a.push(c as u8);
            let stop = rec(a, n, q, top.max(c + 1), f);
            a.pop();
            if stop {
                return true;
            }
        }
        false
    }
    if n == 0 {
        return f(&[]);
    }
    let mut a = Vec::with_capacity(n);
    rec(&mut a, n, q.max(1), 0, f)
}

fn strip_leaves(g: &Graph) -> Graph {
    let mut h = g.clone();
    loop {
        let leaves: BTreeSet<Vertex> = h.vertices().filter(|&v| h.degree(v) == 1).collect();
        if leaves.is_empty() || h.vertex_count() <= 2 {
            return h;
        }
        // never strip both ends of the last edge
        let first = *leaves.iter().next().unwrap();
        h.remove_vertex(first);
    }
}

fn join(mut a: Vec<Edge>, b: Vec<Edge>) -> Vec<Edge> {
    a.extend(b);
    a
}

fn spanning_tree_minus_leaf(g: &Graph) -> Vec<Edge> {
    let tree = g.spanning_forest();
    let mut deg: HashMap<Vertex, usize> = HashMap::new();
    for e in &tree {
        *deg.entry(e.lo()).or_default() += 1;
        *deg.entry(e.hi()).or_default() += 1;
    }
    let leaf_edge = tree
        .iter()
        .position(|e| deg[&e.lo()] == 1 || deg[&e.hi()] == 1)
        .unwrap();
    tree.into_iter()
        .enumerate()
        .filter(|&(i, _)| i != leaf_edge)
        .map(|(_, e)| e)
        .collect()
}
