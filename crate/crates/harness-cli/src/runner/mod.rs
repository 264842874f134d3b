//! Experiment runners.
//!
//! Each runner is a pure function of its config: it computes everything in
//! memory, sorts rows deterministically, and hands back the bytes of every
//! file it wants written plus a threshold report. The binary does the
//! writing; tests can inspect the bytes directly.

mod graph;
mod nn;
mod op_error;
mod resonator;

pub use graph::run_graph;
pub use nn::run_nn;
pub use op_error::run_op_error;
pub use resonator::run_resonator;

use crate::config::ExperimentConfig;
use crate::csv::{fnum, CsvWriter};
use crate::error::Result;

/// One output file, as a path relative to the working directory plus its
/// full contents.
#[derive(Debug)]
pub struct OutputFile {
    pub path: String,
    pub bytes: Vec<u8>,
}

/// One `--check` threshold: a human-readable statement and whether the run
/// satisfied it.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn push(&mut self, passed: bool, label: String) {
        self.lines.push(CheckLine { label, passed });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub files: Vec<OutputFile>,
    pub check: CheckReport,
}

/// A single named metric, the row type of every `-summary.csv` sidecar.
/// Records are only ever appended during a run, and identical config+seed
/// reproduces identical values.
#[derive(Debug, Clone)]
pub struct ResultRecord {
    pub experiment: &'static str,
    pub seed: u64,
    pub backend: String,
    pub metric: String,
    pub value: f64,
}

pub(crate) fn summary_csv(hash: &str, records: &[ResultRecord]) -> Vec<u8> {
    let mut w = CsvWriter::new(hash, &["experiment", "seed", "backend", "metric", "value"]);
    for r in records {
        w.row(&[
            r.experiment.to_string(),
            r.seed.to_string(),
            r.backend.clone(),
            r.metric.clone(),
            fnum(r.value),
        ]);
    }
    w.into_bytes()
}

/// Dispatch on the config variant.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    match config {
        ExperimentConfig::OpError(c) => run_op_error(c),
        ExperimentConfig::Graph(c) => run_graph(c),
        ExperimentConfig::Resonator(c) => run_resonator(c),
        ExperimentConfig::Nn(c) => run_nn(c),
    }
}

/// Nearest-rank quantile on a pre-sorted slice.
pub(crate) fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}
