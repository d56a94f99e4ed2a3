//! Lagrangians of r-uniform hypergraphs, left-compressed graph enumeration
//! and a harness that checks the extremal statements built on them.

pub mod enumeration;
pub mod error;
pub mod hypergraph;
pub mod lagrangian;
pub mod tuple_order;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{colex_graph, complete_graph, Hypergraph};
pub use lagrangian::{LagrangianEstimate, SolverConfig, Weighting};
pub use tuple_order::RTuple;
pub use verify::{run_suite, CheckResult, SuiteConfig, VerificationReport};
