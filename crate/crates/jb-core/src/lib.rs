//! Core combinatorial primitives shared by the judicious-bipartition solvers:
//! multigraphs, hypergraphs, unbreakability checks, tree decompositions,
//! odd cycle transversals, and deterministic covering/perfect families.

pub mod decomp;
pub mod derand;
pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod oct;
pub mod unbreak;

pub use decomp::{TreeDecomposition, ValidationReport};
pub use error::Error;
pub use graph::{Bipartition, MultiGraph};
pub use hypergraph::Hypergraph;
