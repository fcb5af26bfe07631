//! Contracting graphs to `T_ell`: connected graphs that become a tree after
//! deleting at most `ell` edges.
//!
//! The crate bundles an exhaustive oracle, a color-coding solver with random,
//! exhaustive and derandomized coloring sources, splitter and universal
//! family constructions, an approximate kernel with solution lifting, and
//! the text formats and pipelines used by the `tlc` binary.

pub mod cvc;
pub mod derand;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod solver;
pub mod witness;

pub use graph::{Edge, Graph, GraphError, Vertex};
pub use witness::{ContractionSolution, WitnessStructure};

/// A `T_ell`-Contraction instance. `k` may be negative while reductions run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    pub ell: u32,
}

impl Instance {
    pub fn new(graph: Graph, k: i64, ell: u32) -> Instance {
        Instance { graph, k, ell }
    }
}
