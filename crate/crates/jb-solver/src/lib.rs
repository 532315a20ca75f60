//! Exact solvers for judicious bipartition problems on multigraphs.
//!
//! The crate is layered bottom-up: `table` holds the shared (mu, l1, l2)
//! bit-table algebra, `hp` solves hypergraph painting, `abc` runs the
//! tree-decomposition program for connected bipartite instances, and
//! `pipeline` ties everything together behind odd cycle transversal
//! branching. `oracle` carries the brute-force reference implementations
//! the fast paths are checked against, and `gen` produces the deterministic
//! test instances the comparison suites run on.

pub mod abc;
pub mod gen;
pub mod hp;
pub mod oracle;
pub mod pipeline;
pub mod table;

pub use table::{AJPTable, Caps, Table};
