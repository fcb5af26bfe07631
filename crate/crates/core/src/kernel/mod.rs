//! Approximate kernelization: leaf deletion, long-path shortening, false
//! twin deletion and the lossy common-neighborhood contraction, with a
//! replayable trace and solution lifting.

mod lift;
mod rules;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::Instance;

pub use lift::lift_solution;
pub use rules::{
    partition_hir, reduce_common_neighborhood, reduce_false_twins, reduce_leaves,
    reduce_long_paths, HirPartition,
};

/// Largest `d = ceil(alpha / (alpha - 1))` accepted.
pub const MAX_D: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("trace does not match the instance: {0}")]
    Mismatch(String),
    #[error("edge {0} is not in the reduced graph")]
    ForeignEdge(Edge),
    #[error("the given edge set is not a solution of the reduced instance")]
    NotASolution,
}

/// An approximation ratio `num / den > 1`, kept exact so that `d` is
/// computed without rounding error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Alpha, KernelError> {
        if den == 0 || num <= den {
            return Err(KernelError::Parameter(format!("alpha must exceed 1, got {num}/{den}")));
        }
        let g = gcd(num, den);
        let a = Alpha {
            num: num / g,
            den: den / g,
        };
        if a.d_unchecked() > MAX_D as u64 {
            return Err(KernelError::Parameter(format!(
                "alpha {a} gives d = {} > {MAX_D}",
                a.d_unchecked()
            )));
        }
        Ok(a)
    }

    pub fn integer(a: u64) -> Result<Alpha, KernelError> {
        Alpha::new(a, 1)
    }

    /// `ceil(alpha / (alpha - 1))`.
    pub fn d(&self) -> u32 {
        self.d_unchecked() as u32
    }

    fn d_unchecked(&self) -> u64 {
        self.num.div_ceil(self.num - self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `value <= alpha * reference`, exactly.
    pub fn bounds(&self, value: u64, reference: u64) -> bool {
        (value as u128) * (self.den as u128) <= (reference as u128) * (self.num as u128)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `3/2`, `1.5` or `2`.
impl FromStr for Alpha {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Alpha, KernelError> {
        let bad = || KernelError::Parameter(format!("cannot parse alpha {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim().parse().map_err(|_| bad())?;
            return Alpha::new(n, d);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 9 {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        Alpha::new(num, den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// A degree-1 vertex was deleted.
    LeafDelete { vertex: Vertex, neighbor: Vertex },
    /// An edge inside a long run of degree-2 vertices was contracted; the
    /// merged vertex keeps the smaller id.
    LongPathContract { edge: Edge, merged: Vertex },
    /// A vertex with many false twins was deleted.
    TwinDelete { vertex: Vertex, neighborhood: Vec<Vertex> },
    /// Edges from `pivot` to every hub were contracted and the budget
    /// dropped by `hubs.len() - 1`.
    CommonNbrContract {
        pivot: Vertex,
        hubs: Vec<Vertex>,
        merged: Vertex,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Open,
    DecidedYes,
    DecidedNo,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Open => "open",
            Outcome::DecidedYes => "yes",
            Outcome::DecidedNo => "no",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTrace {
    pub k: i64,
    pub ell: u32,
    pub alpha: Alpha,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

impl KernelTrace {
    pub fn d(&self) -> u32 {
        self.alpha.d()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSet {
    pub leaves: bool,
    pub long_paths: bool,
    pub twins: bool,
    pub common_nbr: bool,
}

impl RuleSet {
    pub const ALL: RuleSet = RuleSet {
        leaves: true,
        long_paths: true,
        twins: true,
        common_nbr: true,
    };
    pub const NONE: RuleSet = RuleSet {
        leaves: false,
        long_paths: false,
        twins: false,
        common_nbr: false,
    };
}

#[derive(Clone, Debug)]
pub struct Kernelized {
    pub instance: Instance,
    pub trace: KernelTrace,
}

/// Applies every rule exhaustively, then flags instances above
/// [`size_bound`] as no-instances.
pub fn kernelize(inst: &Instance, alpha: Alpha) -> Kernelized {
    kernelize_with(inst, alpha, RuleSet::ALL)
}

/// Applies the selected rules until none fires, in the fixed priority
/// leaves, long paths, twins, common neighborhood. The outcome is yes when
/// the final graph is already in `T_ell`, and no when the budget runs out
/// or, with all rules enabled, the graph exceeds [`size_bound`].
pub fn kernelize_with(inst: &Instance, alpha: Alpha, rules: RuleSet) -> Kernelized {
    let d = alpha.d();
    let (ell, mut k) = (inst.ell, inst.k);
    let mut g = inst.graph.clone();
    let mut steps = Vec::new();
    let outcome = loop {
        if k < 0 || !g.is_connected() {
            break Outcome::DecidedNo;
        }
        let member = g.is_in_t_ell(ell);
        if k == 0 && !member {
            break Outcome::DecidedNo;
        }
        let step = None
            .or_else(|| rules.leaves.then(|| reduce_leaves(&mut g)).flatten())
            .or_else(|| rules.long_paths.then(|| reduce_long_paths(&mut g, k)).flatten())
            .or_else(|| rules.twins.then(|| reduce_false_twins(&mut g, k, ell)).flatten())
            .or_else(|| {
                rules
                    .common_nbr
                    .then(|| reduce_common_neighborhood(&mut g, &mut k, ell, d))
                    .flatten()
            });
        match step {
            Some(s) => steps.push(s),
            None if member => break Outcome::DecidedYes,
            None => {
                let too_big = rules == RuleSet::ALL
                    && g.vertex_count() as u128 > size_bound(k, ell, d);
                break if too_big { Outcome::DecidedNo } else { Outcome::Open };
            }
        }
    };
    Kernelized {
        instance: Instance::new(g, k, ell),
        trace: KernelTrace {
            k: inst.k,
            ell,
            alpha,
            steps,
            outcome,
        },
    }
}

/// Vertex bound for a yes-instance on which no rule applies:
/// `|H| + |R| + |I|` with `h = 2(k+3)(k+2 ell)`, `|H| <= h`,
/// `|R| <= 8(k+3)^2(k+2 ell)^2`, and `|I|` bounded by `k + ell + 2` vertices
/// per neighborhood of size below `d` plus `k + ell + 1` vertices per
/// `d`-subset of `H`. Saturates instead of overflowing.
pub fn size_bound(k: i64, ell: u32, d: u32) -> u128 {
    let k = k.max(0) as u128;
    let ell = ell as u128;
    let h = 2 * (k + 3) * (k + 2 * ell);
    let r = 8 * (k + 3) * (k + 3) * (k + 2 * ell) * (k + 2 * ell);
    let small: u128 = (0..d as u128).fold(0u128, |acc, j| acc.saturating_add(binom(h, j)));
    let i = small
        .saturating_mul(k + ell + 2)
        .saturating_add(binom(h, d as u128).saturating_mul(k + ell + 1));
    h.saturating_add(r).saturating_add(i)
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut c = 1u128;
    for j in 0..k {
        c = c.saturating_mul(n - j) / (j + 1);
    }
    c
}

/// Stage graphs and budgets obtained by replaying `trace` on `original`;
/// entry `i` is the state before step `i`, the last entry the reduced one.
pub fn replay(original: &Instance, trace: &KernelTrace) -> Result<Vec<(Graph, i64)>, KernelError> {
    if original.k != trace.k || original.ell != trace.ell {
        return Err(KernelError::Mismatch(format!(
            "trace was made for k={} ell={}, instance has k={} ell={}",
            trace.k, trace.ell, original.k, original.ell
        )));
    }
    let mut stages = vec![(original.graph.clone(), original.k)];
    for (i, step) in trace.steps.iter().enumerate() {
        let (g, k) = stages.last().unwrap();
        let next = apply_step(g, *k, step).map_err(|m| KernelError::Mismatch(format!("step {}: {m}", i + 1)))?;
        stages.push(next);
    }
    Ok(stages)
}

fn apply_step(g: &Graph, k: i64, step: &Step) -> Result<(Graph, i64), String> {
    match step {
        Step::LeafDelete { vertex, neighbor } => {
            if g.degree(*vertex) != 1 || !g.has_edge(*vertex, *neighbor) {
                return Err(format!("{vertex} is not a leaf hanging from {neighbor}"));
            }
            let mut h = g.clone();
            h.remove_vertex(*vertex);
            Ok((h, k))
        }
        Step::LongPathContract { edge, merged } => {
            if !g.contains_edge(*edge) || *merged != edge.lo() {
                return Err(format!("cannot contract {edge} into {merged}"));
            }
            if g.degree(edge.lo()) != 2 || g.degree(edge.hi()) != 2 {
                return Err(format!("{edge} is not inside a degree-2 run"));
            }
            let (h, _) = crate::graph::contract_edges(g, &[*edge]).map_err(|e| e.to_string())?;
            Ok((h, k))
        }
        Step::TwinDelete { vertex, neighborhood } => {
            let actual: Vec<Vertex> = match g.neighbor_set(*vertex) {
                Some(n) => n.iter().copied().collect(),
                None => return Err(format!("vertex {vertex} is missing")),
            };
            if &actual != neighborhood {
                return Err(format!("neighborhood of {vertex} differs"));
            }
            let mut h = g.clone();
            h.remove_vertex(*vertex);
            Ok((h, k))
        }
        Step::CommonNbrContract { pivot, hubs, merged } => {
            let edges: Vec<Edge> = hubs.iter().map(|&h| Edge::new(*pivot, h)).collect();
            let lowest = hubs.iter().copied().chain([*pivot]).min();
            if hubs.is_empty() || edges.iter().any(|e| !g.contains_edge(*e)) || lowest != Some(*merged) {
                return Err(format!("cannot contract {pivot} with hubs {hubs:?}"));
            }
            let (h, _) = crate::graph::contract_edges(g, &edges).map_err(|e| e.to_string())?;
            Ok((h, k - (hubs.len() as i64 - 1)))
        }
    }
}
