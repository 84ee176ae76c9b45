//! Cycle, path and cover polynomials of directed multigraphs.

pub mod corpus;
pub mod digraph;
pub mod engine;
pub mod oracle;
pub mod polynomial;
pub mod relations;
