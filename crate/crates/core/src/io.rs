//! Line-oriented text formats for graphs, witness structures, function
//! families and kernel traces.
//!
//! Graph files start with `p <n> <m>` followed by `m` lines `e <u> <v>` on
//! vertices `1..=n`. Lines starting with `c` are comments everywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::derand::{FamilyKind, FunctionFamily};
use crate::graph::{Edge, Graph, Vertex};
use crate::kernel::{Alpha, KernelTrace, Outcome, Step};
use crate::witness::WitnessStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Input(String),
}

fn at(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        msg: msg.into(),
    }
}

// Non-empty, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(t) if t.starts_with('c') && *t != "common" => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| at(line, format!("bad {what} {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::Input("empty graph file".into()))?;
    if header.len() != 3 || header[0] != "p" {
        return Err(at(hl, "expected header \"p <n> <m>\""));
    }
    let n: u32 = number(hl, header[1], "vertex count")?;
    let m: usize = number(hl, header[2], "edge count")?;
    let mut g = Graph::from_parts(1..=n, std::iter::empty()).unwrap();
    let mut count = 0;
    for (ln, toks) in lines {
        if toks.len() != 3 || toks[0] != "e" {
            return Err(at(ln, "expected \"e <u> <v>\""));
        }
        let u: u32 = number(ln, toks[1], "vertex")?;
        let v: u32 = number(ln, toks[2], "vertex")?;
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(at(ln, format!("endpoint {x} outside 1..={n}")));
            }
        }
        match g.add_edge(u, v) {
            Ok(true) => {}
            Ok(false) => return Err(at(ln, format!("duplicate edge {u}-{v}"))),
            Err(_) => return Err(at(ln, format!("self-loop at {u}"))),
        }
        count += 1;
    }
    if count != m {
        return Err(at(hl, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

/// Writes `g` on vertices `1..=n`, numbering its vertices in increasing id
/// order. The returned map sends file ids to graph ids.
pub fn serialize_graph_labeled(g: &Graph) -> (String, BTreeMap<Vertex, Vertex>) {
    let ids: Vec<Vertex> = g.vertices().collect();
    let to_file: BTreeMap<Vertex, Vertex> = ids.iter().enumerate().map(|(i, &v)| (v, i as u32 + 1)).collect();
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {}", to_file[&e.lo()], to_file[&e.hi()]);
    }
    let labels = to_file.into_iter().map(|(v, f)| (f, v)).collect();
    (out, labels)
}

pub fn serialize_graph(g: &Graph) -> String {
    serialize_graph_labeled(g).0
}

/// One bag per line.
pub fn parse_witness(text: &str) -> Result<WitnessStructure, ParseError> {
    let mut bags = Vec::new();
    for (ln, toks) in content_lines(text) {
        let bag = toks
            .iter()
            .map(|t| number::<Vertex>(ln, t, "vertex"))
            .collect::<Result<_, _>>()?;
        bags.push(bag);
    }
    Ok(WitnessStructure::new(bags))
}

pub fn serialize_witness(w: &WitnessStructure) -> String {
    let mut out = String::new();
    for bag in w.bags() {
        let items: Vec<String> = bag.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", items.join(" "));
    }
    out
}

/// Edge lists, one `u v` pair per line.
pub fn parse_edges(text: &str) -> Result<Vec<Edge>, ParseError> {
    let mut out = Vec::new();
    for (ln, toks) in content_lines(text) {
        let toks = if toks[0] == "e" { &toks[1..] } else { &toks[..] };
        if toks.len() != 2 {
            return Err(at(ln, "expected an edge \"u v\""));
        }
        let u = number(ln, toks[0], "vertex")?;
        let v = number(ln, toks[1], "vertex")?;
        out.push(Edge::try_new(u, v).ok_or_else(|| at(ln, "self-loop"))?);
    }
    Ok(out)
}

pub fn serialize_edges(f: &[Edge]) -> String {
    f.iter().map(|e| format!("{} {}\n", e.lo(), e.hi())).collect()
}

/// Header `family <n> <q> <kind> <k>`, then one function per line as `n`
/// values in `1..=q`.
pub fn parse_family(text: &str) -> Result<FunctionFamily, ParseError> {
    let mut lines = content_lines(text);
    let (hl, h) = lines.next().ok_or_else(|| ParseError::Input("empty family file".into()))?;
    if h.len() != 5 || h[0] != "family" {
        return Err(at(hl, "expected header \"family <n> <q> <kind> <k>\""));
    }
    let n: usize = number(hl, h[1], "n")?;
    let q: u32 = number(hl, h[2], "q")?;
    let kind = FamilyKind::parse(h[3]).ok_or_else(|| at(hl, format!("unknown kind {:?}", h[3])))?;
    let k: usize = number(hl, h[4], "k")?;
    if !(1..=256).contains(&q) {
        return Err(at(hl, "q must lie in 1..=256"));
    }
    let mut fam = FunctionFamily::new(n, q, k, kind, "file");
    let mut buf = vec![0u8; n];
    for (ln, toks) in lines {
        if toks.len() != n {
            return Err(at(ln, format!("expected {n} values, found {}", toks.len())));
        }
        for (slot, t) in buf.iter_mut().zip(&toks) {
            let v: u32 = number(ln, t, "value")?;
            if v == 0 || v > q {
                return Err(at(ln, format!("value {v} outside 1..={q}")));
            }
            *slot = (v - 1) as u8;
        }
        fam.push(&buf);
    }
    Ok(fam)
}

pub fn serialize_family(fam: &FunctionFamily) -> String {
    let mut out = format!("family {} {} {} {}\n", fam.n, fam.q, fam.kind.name(), fam.k);
    for f in fam.iter() {
        let vals: Vec<String> = f.iter().map(|&v| (v as u32 + 1).to_string()).collect();
        let _ = writeln!(out, "{}", vals.join(" "));
    }
    out
}

/// A trace plus the numbering of the reduced graph file: `labels` maps file
/// ids of the reduced graph to vertex ids of the original.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub trace: KernelTrace,
    pub labels: BTreeMap<Vertex, Vertex>,
}

/// Line-oriented log:
///
/// ```text
/// trace <k> <ell> <alpha>
/// leaf <vertex> <neighbor>
/// path <u> <v> <merged>
/// twin <vertex> <neighbors...>
/// common <pivot> <merged> <hubs...>
/// label <file id> <vertex>
/// outcome <open|yes|no>
/// ```
pub fn serialize_trace(t: &TraceFile) -> String {
    let tr = &t.trace;
    let mut out = format!("trace {} {} {}\n", tr.k, tr.ell, tr.alpha);
    for s in &tr.steps {
        let line = match s {
            Step::LeafDelete { vertex, neighbor } => format!("leaf {vertex} {neighbor}"),
            Step::LongPathContract { edge, merged } => format!("path {} {} {merged}", edge.lo(), edge.hi()),
            Step::TwinDelete { vertex, neighborhood } => format!("twin {vertex} {}", join(neighborhood)),
            Step::CommonNbrContract { pivot, hubs, merged } => format!("common {pivot} {merged} {}", join(hubs)),
        };
        out.push_str(line.trim_end());
        out.push('\n');
    }
    for (f, v) in &t.labels {
        let _ = writeln!(out, "label {f} {v}");
    }
    let _ = writeln!(out, "outcome {}", tr.outcome.name());
    out
}

fn join(v: &[Vertex]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_trace(text: &str) -> Result<TraceFile, ParseError> {
    let mut lines = content_lines(text);
    let (hl, h) = lines.next().ok_or_else(|| ParseError::Input("empty trace file".into()))?;
    if h.len() != 4 || h[0] != "trace" {
        return Err(at(hl, "expected header \"trace <k> <ell> <alpha>\""));
    }
    let k: i64 = number(hl, h[1], "k")?;
    let ell: u32 = number(hl, h[2], "ell")?;
    let alpha: Alpha = h[3].parse().map_err(|e: crate::kernel::KernelError| at(hl, e.to_string()))?;
    let mut steps = Vec::new();
    let mut labels = BTreeMap::new();
    let mut outcome = None;
    for (ln, toks) in lines {
        if toks[0] == "outcome" {
            outcome = Some(match toks.get(1).copied() {
                Some("open") if toks.len() == 2 => Outcome::Open,
                Some("yes") if toks.len() == 2 => Outcome::DecidedYes,
                Some("no") if toks.len() == 2 => Outcome::DecidedNo,
                _ => return Err(at(ln, "expected \"outcome <open|yes|no>\"")),
            });
            continue;
        }
        let nums = toks[1..]
            .iter()
            .map(|t| number::<Vertex>(ln, t, "vertex"))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |lo: usize, exact: bool| {
            if nums.len() < lo || (exact && nums.len() != lo) {
                Err(at(ln, format!("wrong number of fields for {:?}", toks[0])))
            } else {
                Ok(())
            }
        };
        match toks[0] {
            "leaf" => {
                arity(2, true)?;
                steps.push(Step::LeafDelete {
                    vertex: nums[0],
                    neighbor: nums[1],
                });
            }
            "path" => {
                arity(3, true)?;
                let edge = Edge::try_new(nums[0], nums[1]).ok_or_else(|| at(ln, "self-loop"))?;
                steps.push(Step::LongPathContract { edge, merged: nums[2] });
            }
            "twin" => {
                arity(1, false)?;
                steps.push(Step::TwinDelete {
                    vertex: nums[0],
                    neighborhood: nums[1..].to_vec(),
                });
            }
            "common" => {
                arity(3, false)?;
                steps.push(Step::CommonNbrContract {
                    pivot: nums[0],
                    merged: nums[1],
                    hubs: nums[2..].to_vec(),
                });
            }
            "label" => {
                arity(2, true)?;
                labels.insert(nums[0], nums[1]);
            }
            other => return Err(at(ln, format!("unknown record {other:?}"))),
        }
    }
    let outcome = outcome.ok_or_else(|| ParseError::Input("trace has no outcome line".into()))?;
    Ok(TraceFile {
        trace: KernelTrace {
            k,
            ell,
            alpha,
            steps,
            outcome,
        },
        labels,
    })
}
