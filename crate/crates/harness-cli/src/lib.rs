//! Config-driven experiment runner for the oscillator/phase comparison
//! suite. Four experiments, each a pure function of its JSON config:
//!
//! - `op-error`  — per-operation oscillator-vs-phase error over a full
//!                 grid of operand pairs, tracked per settling period;
//! - `graph`     — random-graph edge recovery AUROC sweep over edge
//!                 probability, both backends, with a rank-sum comparison;
//! - `resonator` — factorization success rate and convergence traces;
//! - `nn`        — phase-network training plus dual-backend inference.
//!
//! Everything lands in CSV (plus one binary weight file for `nn`), every
//! file carries the hash of the config that produced it, and re-running an
//! identical config yields byte-identical outputs regardless of worker
//! count. The `hdosc` binary is a thin wrapper around [`runner::run`].

pub mod config;
pub mod csv;
pub mod error;
pub mod runner;

pub use config::{
    apply_overrides, parse_config, BackendChoice, ExperimentConfig, ExperimentKind, GraphConfig,
    NnConfig, OpErrorConfig, OpKind, Overrides, ResonatorConfig,
};
pub use error::{HarnessError, Result};
pub use runner::{run, CheckReport, OutputFile, ResultRecord, RunOutput};
