//! Algorithms that run *on top of* the phase-symbol algebra, written once
//! and executed on either backend: graph edge compression with similarity
//! readout, rank statistics for scoring, and resonator factorization.

mod backend;
mod error;
mod graph;
mod resonator;
mod stats;

pub use backend::{Backend, HdOps, OscOps, PhaseOps};
pub use error::HdError;
pub use graph::{
    compress_edges, gen_erdos_renyi, pair_scores, predict_edges, Graph, HdGraphCode,
};
pub use resonator::{
    compose, resonator_factor, FactorProblem, IterationRecord, ResonatorOptions, ResonatorOutcome,
};
pub use stats::{auroc, mann_whitney_u, sign_test, sign_test_counts, MannWhitney};

pub type Result<T> = std::result::Result<T, HdError>;
