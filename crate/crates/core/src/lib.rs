//! Certifying coloring for t-broom-free graphs.
//!
//! The library either colors a graph properly with a certified bound that is
//! polynomial in its clique number, or returns a concrete induced t-broom
//! (or K_{t,t}) witness proving the input lies outside the class. An
//! independent verifier re-checks every claim a certificate makes using only
//! the graph primitives and the exact oracles.

pub mod certify;
pub mod colorer;
pub mod corpus;
pub mod decompose;
pub mod detect;
pub mod dimacs;
pub mod error;
pub mod gen;
pub mod graph;
pub mod oracle;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
