//! Exact graph-polynomial engine for multigraphs on at most 32 vertices.
//!
//! The centrepiece is the full coefficient table of the Tutte polynomial,
//! computed in vertex-exponential time by evaluating the Potts-model
//! partition function on a grid of integer points and interpolating the
//! multivariate subgraph-expansion coefficients exactly (all modular
//! arithmetic is combined by the Chinese remainder theorem, so every
//! published number is an exact integer).  The same machinery yields the
//! cover polynomial of directed multigraphs, spanning-tree counts, and the
//! usual specialisations (chromatic polynomial, all-terminal reliability).
//!
//! Five independent evaluation pipelines are provided and cross-checked
//! against brute-force oracles; see [`compute_tutte`] for the entry point.

use std::fmt;

pub mod connected;
pub mod cover;
pub mod graph;
pub mod modular;
pub mod oracle;
pub mod pipeline;
pub mod potts;
pub mod recursion;
pub mod transforms;
pub mod tutte;

pub use cover::{cover_evaluate, cover_table, CoverMode, CoverTable};
pub use graph::{Digraph, Multigraph, VertexSet, MAX_VERTICES};
pub use modular::{Fp, ZPoly};
pub use pipeline::{
    evaluate_z, evaluate_z_with_weights, z_coefficient_table, Algorithm, RunOptions, ZCoefficients,
};
pub use potts::{potts_value, EdgeWeights, PottsInstance, Strategy};
pub use transforms::{LatticeFunction, OpCount};
pub use tutte::{
    chromatic_polynomial, compute_tutte, consistency_check, reliability, ConsistencyReport,
    TutteTable,
};

/// Errors surfaced by parsing and by the computation pipelines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    Parse { line: usize, msg: String },
    /// The request exceeds a hard size or memory limit.
    Capacity(String),
    /// An invalid argument (out-of-domain evaluation point, bad flag value).
    Invalid(String),
    /// An internal cross-check failed; the computed result must not be used.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, msg } => write!(f, "parse error on line {line}: {msg}"),
            Error::Capacity(msg) => write!(f, "capacity exceeded: {msg}"),
            Error::Invalid(msg) => write!(f, "invalid argument: {msg}"),
            Error::Internal(msg) => write!(f, "internal consistency failure: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
