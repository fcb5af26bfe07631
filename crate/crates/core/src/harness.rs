//! The `tlc` command line: one instance per invocation, a single
//! `result ...` record on stdout, exit status 0 for yes, 1 for no and 2 for
//! errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::derand::{self, FamilyKind, FunctionFamily};
use crate::graph::{Edge, Graph};
use crate::io::{self, TraceFile};
use crate::kernel::{self, Alpha, Outcome};
use crate::oracle;
use crate::solver::{self, Mode};
use crate::witness::{capped_value, verify_solution, verify_witness, witness_from_solution};
use crate::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    /// Brute-force oracle.
    Exact,
    /// Color coding with random colorings.
    Rand,
    /// Color coding over every coloring.
    Exhaustive,
    /// Color coding over a universal family built on demand.
    Derand,
    /// Color coding over the colorings in `--family-file`.
    Family,
    /// Approximate kernelization; writes the reduced graph and the trace.
    Kernel,
    /// Lifts a solution of a reduced instance through `--trace`.
    Lift,
    /// Checks `--witness` or `--solution` against the instance.
    Verify,
    /// Builds a function family.
    FamilyBuild,
    /// Brute-force check of the family in `--family-file`.
    FamilyVerify,
}

impl RunMode {
    fn name(self) -> &'static str {
        match self {
            RunMode::Exact => "exact",
            RunMode::Rand => "rand",
            RunMode::Exhaustive => "exhaustive",
            RunMode::Derand => "derand",
            RunMode::Family => "family",
            RunMode::Kernel => "kernel",
            RunMode::Lift => "lift",
            RunMode::Verify => "verify",
            RunMode::FamilyBuild => "family-build",
            RunMode::FamilyVerify => "family-verify",
        }
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "tlc", about = "Contract a graph into a tree plus at most ell extra edges")]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub mode: RunMode,
    /// Contraction budget, or the subset size for family modes.
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<i64>,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    /// Approximation ratio, e.g. `2`, `1.5` or `3/2`.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random colorings; defaults to a bound from k and ell.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Input graph.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output file: witness, reduced graph, lifted edges or family.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub family_file: Option<PathBuf>,
    /// Witness structure to verify.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Edge set to verify or lift, one `u v` pair per line.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Domain size for `family-build`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of colors for `family-build`.
    #[arg(long)]
    pub q: Option<u32>,
    /// Family kind for `family-build`: universal, splitter or perfect-hash.
    #[arg(long, default_value = "universal")]
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Record {
    yes: bool,
    cost: i64,
    extra: Vec<(&'static str, String)>,
}

/// Runs one configuration. Never panics on bad input: errors become exit
/// status 2 with a message on stderr.
pub fn run(cfg: &RunConfig) -> RunOutput {
    match dispatch(cfg) {
        Ok(rec) => {
            let mut line = format!(
                "result decision={} cost={} mode={} seed={}",
                if rec.yes { "yes" } else { "no" },
                rec.cost,
                cfg.mode.name(),
                cfg.seed
            );
            for (key, val) in rec.extra {
                line.push_str(&format!(" {key}={val}"));
            }
            line.push('\n');
            RunOutput {
                code: if rec.yes { 0 } else { 1 },
                stdout: line,
                stderr: String::new(),
            }
        }
        Err(msg) => RunOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Record, String> {
    match cfg.mode {
        RunMode::Exact | RunMode::Rand | RunMode::Exhaustive | RunMode::Derand | RunMode::Family => solve(cfg),
        RunMode::Kernel => kernelize(cfg),
        RunMode::Lift => lift(cfg),
        RunMode::Verify => verify(cfg),
        RunMode::FamilyBuild => family_build(cfg),
        RunMode::FamilyVerify => family_verify(cfg),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn required<'a, T>(v: &'a Option<T>, flag: &str, mode: RunMode) -> Result<&'a T, String> {
    v.as_ref().ok_or_else(|| format!("--{flag} is required for mode {}", mode.name()))
}

fn load_instance(cfg: &RunConfig) -> Result<Instance, String> {
    let path = required(&cfg.input, "in", cfg.mode)?;
    let g = io::parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let k = *required(&cfg.k, "k", cfg.mode)?;
    Ok(Instance::new(g, k, cfg.ell))
}

fn edge_list(f: &[Edge]) -> String {
    let parts: Vec<String> = f.iter().map(Edge::to_string).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

fn solve(cfg: &RunConfig) -> Result<Record, String> {
    let inst = load_instance(cfg)?;
    let family;
    let found: Option<Vec<Edge>> = match cfg.mode {
        RunMode::Exact => oracle::exact_opt(&inst.graph, inst.ell, inst.k)
            .map_err(|e| e.to_string())?
            .map(|(f, _)| f),
        _ => {
            let mode = match cfg.mode {
                RunMode::Rand => Mode::Random {
                    seed: cfg.seed,
                    iters: cfg.iters,
                },
                RunMode::Exhaustive => Mode::Exhaustive,
                RunMode::Derand => Mode::Derandomized,
                _ => {
                    let path = required(&cfg.family_file, "family-file", cfg.mode)?;
                    family = io::parse_family(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
                    Mode::Family(&family)
                }
            };
            solver::solve(&inst, mode).map_err(|e| e.to_string())?.map(|s| s.edges)
        }
    };
    let Some(f) = found else {
        return Ok(Record {
            yes: false,
            cost: capped_value(usize::MAX / 2, inst.k),
            extra: vec![],
        });
    };
    let w = witness_from_solution(&inst.graph, &f);
    let verdict = verify_witness(&inst.graph, &w, inst.ell, inst.k);
    if !verdict.is_valid() {
        return Err("internal error: solver output failed verification".into());
    }
    if let Some(out) = &cfg.out {
        write(out, &io::serialize_witness(&w))?;
    }
    Ok(Record {
        yes: true,
        cost: f.len() as i64,
        extra: vec![("edges", edge_list(&f))],
    })
}

fn parse_alpha(cfg: &RunConfig) -> Result<Alpha, String> {
    required(&cfg.alpha, "alpha", cfg.mode)?
        .parse()
        .map_err(|e: kernel::KernelError| e.to_string())
}

fn kernelize(cfg: &RunConfig) -> Result<Record, String> {
    let inst = load_instance(cfg)?;
    let alpha = parse_alpha(cfg)?;
    let out = kernel::kernelize(&inst, alpha);
    let (text, labels) = io::serialize_graph_labeled(&out.instance.graph);
    let outcome = out.trace.outcome;
    if let Some(path) = &cfg.out {
        write(path, &text)?;
    }
    if let Some(path) = &cfg.trace {
        let tf = TraceFile {
            trace: out.trace.clone(),
            labels,
        };
        write(path, &io::serialize_trace(&tf))?;
    }
    Ok(Record {
        yes: outcome != Outcome::DecidedNo,
        cost: if outcome == Outcome::DecidedNo { inst.k + 1 } else { 0 },
        extra: vec![
            ("outcome", outcome.name().into()),
            ("k", out.instance.k.to_string()),
            ("vertices", out.instance.graph.vertex_count().to_string()),
            ("steps", out.trace.steps.len().to_string()),
        ],
    })
}

fn lift(cfg: &RunConfig) -> Result<Record, String> {
    let inst = load_instance(cfg)?;
    let tpath = required(&cfg.trace, "trace", cfg.mode)?;
    let tf = io::parse_trace(&read(tpath)?).map_err(|e| format!("{}: {e}", tpath.display()))?;
    let reduced_edges = match &cfg.solution {
        Some(p) => io::parse_edges(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
        None => Vec::new(),
    };
    let mut mapped = Vec::with_capacity(reduced_edges.len());
    for e in reduced_edges {
        let (a, b) = e.endpoints();
        let look = |v| tf.labels.get(&v).copied().ok_or_else(|| format!("vertex {v} is not in the reduced graph"));
        mapped.push(Edge::try_new(look(a)?, look(b)?).ok_or("self-loop after relabeling")?);
    }
    let lifted = kernel::lift_solution(&inst, &tf.trace, &mapped).map_err(|e| e.to_string())?;
    let verdict = verify_solution(&inst.graph, &lifted, inst.ell, inst.k);
    if let Some(out) = &cfg.out {
        write(out, &io::serialize_edges(&lifted))?;
    }
    Ok(Record {
        yes: verdict.is_valid(),
        cost: capped_value(lifted.len(), inst.k),
        extra: vec![("edges", edge_list(&lifted))],
    })
}

fn verify(cfg: &RunConfig) -> Result<Record, String> {
    let inst = load_instance(cfg)?;
    let verdict = match (&cfg.witness, &cfg.solution) {
        (Some(p), None) => {
            let w = io::parse_witness(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
            verify_witness(&inst.graph, &w, inst.ell, inst.k)
        }
        (None, Some(p)) => {
            let f = io::parse_edges(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
            verify_solution(&inst.graph, &f, inst.ell, inst.k)
        }
        _ => return Err("mode verify needs exactly one of --witness and --solution".into()),
    };
    let mut extra = vec![];
    if let Some(r) = verdict.reason {
        extra.push(("reason", r.code().to_string()));
    }
    Ok(Record {
        yes: verdict.is_valid(),
        cost: capped_value(verdict.cost, inst.k),
        extra,
    })
}

fn family_build(cfg: &RunConfig) -> Result<Record, String> {
    let n = *required(&cfg.n, "n", cfg.mode)?;
    let k = usize::try_from(*required(&cfg.k, "k", cfg.mode)?).map_err(|_| "--k must be nonnegative")?;
    let kind = FamilyKind::parse(&cfg.kind).ok_or_else(|| format!("unknown family kind {:?}", cfg.kind))?;
    let fam: FunctionFamily = match kind {
        FamilyKind::Universal => {
            let q = *required(&cfg.q, "q", cfg.mode)?;
            solver::build_family(n, k, q)
        }
        FamilyKind::Splitter => {
            let q = *required(&cfg.q, "q", cfg.mode)?;
            derand::build_interval_splitter(n, k, q)
        }
        FamilyKind::PerfectHash => derand::build_hash_splitter(n, k),
    }
    .map_err(|e| e.to_string())?;
    let text = io::serialize_family(&fam);
    if let Some(p) = &cfg.out { write(p, &text)? }
    Ok(Record {
        yes: true,
        cost: fam.len() as i64,
        extra: vec![("functions", fam.len().to_string()), ("q", fam.q.to_string())],
    })
}

fn family_verify(cfg: &RunConfig) -> Result<Record, String> {
    let path = required(&cfg.family_file, "family-file", cfg.mode)?;
    let fam = io::parse_family(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let ok = derand::verify_family(&fam).map_err(|e| e.to_string())?;
    Ok(Record {
        yes: ok,
        cost: fam.len() as i64,
        extra: vec![("kind", fam.kind.name().into())],
    })
}

/// Reads a graph file; a convenience for callers that already hold a path.
pub fn read_graph(path: &Path) -> Result<Graph, String> {
    io::parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("tlc").chain(args.iter().copied())).unwrap()
    }

    fn c4_file(dir: &Path) -> PathBuf {
        let p = dir.join("c4.txt");
        fs::write(&p, io::serialize_graph(&Graph::cycle(4))).unwrap();
        p
    }

    #[test]
    fn exact_on_c4() {
        let dir = tempfile::tempdir().unwrap();
        let g = c4_file(dir.path());
        let out = run(&cfg(&["--mode", "exact", "--k", "2", "--ell", "0", "--in", g.to_str().unwrap()]));
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with("result decision=yes cost=2 mode=exact seed=0"));
        let out = run(&cfg(&["--mode", "exact", "--k", "1", "--in", g.to_str().unwrap()]));
        assert_eq!(out.code, 1);
        assert!(out.stdout.starts_with("result decision=no cost=2"));
    }

    #[test]
    fn missing_inputs_exit_2() {
        let out = run(&cfg(&["--mode", "exact", "--k", "1", "--in", "/nonexistent/graph"]));
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("cannot read"));
        let out = run(&cfg(&["--mode", "exact"]));
        assert_eq!(out.code, 2);
    }

    #[test]
    fn verify_reports_reason() {
        let dir = tempfile::tempdir().unwrap();
        let g = c4_file(dir.path());
        let w = dir.path().join("w.txt");
        fs::write(&w, "1 3\n2\n4\n").unwrap();
        let out = run(&cfg(&[
            "--mode", "verify", "--k", "2", "--in", g.to_str().unwrap(), "--witness", w.to_str().unwrap(),
        ]));
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("reason=disconnected-bag"), "{}", out.stdout);
    }
}
