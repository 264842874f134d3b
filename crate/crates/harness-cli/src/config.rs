//! Experiment configuration: JSON in, validated structs out.
//!
//! Every experiment is a pure function of its config, so the config carries
//! everything: problem sizes, seeds, backend selection, check thresholds,
//! and the output path. Unknown fields are rejected rather than ignored —
//! a typo'd field name should fail loudly, not silently run the defaults.

use clap::ValueEnum;
use hd_algorithms::Backend;
use osc_backend::{Chaining, OscillatorParams, SpikeDriveConfig};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Which backend(s) an experiment runs on. `osc` is the spiking-oscillator
/// substrate; `both` runs phase first, then oscillator, so the comparison
/// statistics can be computed in one pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BackendChoice {
    Phase,
    Osc,
    Both,
}

impl BackendChoice {
    /// Concrete backend instances in a fixed order (phase before
    /// oscillator), labelled for CSV output.
    pub fn instances(&self, drive: &SpikeDriveConfig, chaining: Chaining) -> Vec<Backend> {
        let osc = || Backend::oscillator(OscillatorParams::default(), drive.clone(), chaining);
        match self {
            BackendChoice::Phase => vec![Backend::phase()],
            BackendChoice::Osc => vec![osc()],
            BackendChoice::Both => vec![Backend::phase(), osc()],
        }
    }
}

/// The operation compared by the `op-error` experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    Similarity,
    Bundle,
    Bind,
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::Similarity => "similarity",
            OpKind::Bundle => "bundle",
            OpKind::Bind => "bind",
        }
    }

    /// Default tolerance on the final-period mean |error|, frozen from
    /// pilot runs at the default grid and settle horizon (32×32, 10
    /// periods: similarity 0.0170, bundle 0.0128, bind 0.0256). Bundle and
    /// bind errors are angles (radians); similarity errors are cosine
    /// units. All three shrink like exp(damping·t) with a longer settle.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            OpKind::Similarity => 0.02,
            OpKind::Bundle => 0.05,
            OpKind::Bind => 0.05,
        }
    }
}

/// Sweep one operation over a full grid of phase pairs and record how far
/// the oscillator result drifts from the closed-form phase result at every
/// settling period.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OpErrorConfig {
    pub op: OpKind,
    /// Grid resolution G: the two operands sweep G×G pairs over [0, 2π)².
    pub grid: usize,
    pub drive: SpikeDriveConfig,
    /// Final-period mean |error| bound checked under `--check`.
    /// `null` means "use the per-op default".
    pub tolerance: Option<f64>,
    /// The final error distribution must be centered: two-sided sign test
    /// p-value must exceed this.
    pub sign_alpha: f64,
    /// Bin count for the final-period error histogram sidecar.
    pub bins: usize,
    #[serde(skip_serializing)]
    pub out: String,
}

impl Default for OpErrorConfig {
    fn default() -> Self {
        Self {
            op: OpKind::Similarity,
            grid: 32,
            drive: SpikeDriveConfig::default(),
            tolerance: None,
            sign_alpha: 0.01,
            bins: 41,
            out: "op-error.csv".into(),
        }
    }
}

impl OpErrorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 8 {
            return Err(HarnessError::Config(format!(
                "grid resolution must be at least 8, got {}",
                self.grid
            )));
        }
        if self.bins < 3 {
            return Err(HarnessError::Config(format!(
                "histogram needs at least 3 bins, got {}",
                self.bins
            )));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0) {
                return Err(HarnessError::Config(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
        }
        if !(self.sign_alpha > 0.0 && self.sign_alpha < 1.0) {
            return Err(HarnessError::Config(format!(
                "sign_alpha must lie in (0, 1), got {}",
                self.sign_alpha
            )));
        }
        self.drive
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn resolved_tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| self.op.default_tolerance())
    }
}

/// Random-graph edge recovery: encode Erdős–Rényi graphs of increasing
/// density, decode edge scores, and measure AUROC per trial and backend.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GraphConfig {
    pub nodes: usize,
    pub dim: usize,
    /// Edge probabilities to sweep; each must lie in (0, 1]. p = 0 is
    /// rejected because an edgeless graph has nothing to encode.
    pub edge_probabilities: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub backend: BackendChoice,
    pub chaining: Chaining,
    pub drive: SpikeDriveConfig,
    /// `--check`: mean AUROC at the sparsest probability must exceed this.
    pub min_low_p_auroc: f64,
    /// `--check`: the backend AUROC distributions must NOT separate — the
    /// rank-sum p-value has to stay above this level.
    pub utest_alpha: f64,
    #[serde(skip_serializing)]
    pub out: String,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            nodes: 25,
            dim: 1024,
            edge_probabilities: vec![0.02, 0.05, 0.1, 0.2, 0.4],
            trials: 20,
            seed: 11,
            backend: BackendChoice::Both,
            chaining: Chaining::ReEncode,
            drive: SpikeDriveConfig::default(),
            min_low_p_auroc: 0.9,
            utest_alpha: 0.05,
            out: "graph.csv".into(),
        }
    }
}

impl GraphConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(HarnessError::Config(format!(
                "need at least 2 nodes, got {}",
                self.nodes
            )));
        }
        if self.edge_probabilities.is_empty() {
            return Err(HarnessError::Config(
                "edge_probabilities must be non-empty".into(),
            ));
        }
        for &p in &self.edge_probabilities {
            if !(p > 0.0 && p <= 1.0) {
                return Err(HarnessError::Config(format!(
                    "edge probability must lie in (0, 1], got {p}"
                )));
            }
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        self.drive
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }
}

/// Factor a bound composite with the resonator loop, many trials, and
/// record correctness plus the per-iteration similarity traces.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonatorConfig {
    pub factors: usize,
    pub codebook_size: usize,
    pub dim: usize,
    /// Sweep budget. The runner always executes the full budget (no early
    /// exit) so iteration traces line up across trials.
    pub iterations: usize,
    pub trials: u64,
    pub seed: u64,
    pub backend: BackendChoice,
    pub chaining: Chaining,
    pub drive: SpikeDriveConfig,
    /// `--check`: minimum fraction of trials whose factors all come out
    /// right, applied to the phase backend.
    pub min_correct: f64,
    /// `--check`: the two backends' correct fractions may differ by at
    /// most this much (absolute).
    pub max_backend_gap: f64,
    /// `--check`: mean reconstruction similarity at the final iteration.
    pub min_final_reconstruction: f64,
    /// `--check`: the mean |similarity| to non-factor codebook entries must
    /// stay under this at every iteration.
    pub max_nonfactor: f64,
    #[serde(skip_serializing)]
    pub out: String,
}

impl Default for ResonatorConfig {
    fn default() -> Self {
        Self {
            factors: 3,
            codebook_size: 20,
            dim: 1024,
            iterations: 20,
            trials: 256,
            seed: 7,
            backend: BackendChoice::Both,
            chaining: Chaining::ReEncode,
            drive: SpikeDriveConfig::default(),
            min_correct: 0.95,
            max_backend_gap: 0.03,
            min_final_reconstruction: 0.8,
            max_nonfactor: 0.2,
            out: "resonator.csv".into(),
        }
    }
}

impl ResonatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(HarnessError::Config("iterations must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        // Factor count, codebook size and dimension floors are enforced by
        // the problem generator; surface those as config errors up front.
        if self.factors < 2 {
            return Err(HarnessError::Config(format!(
                "need at least 2 factors, got {}",
                self.factors
            )));
        }
        if self.codebook_size == 0 {
            return Err(HarnessError::Config("codebook_size must be at least 1".into()));
        }
        self.drive
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }
}

/// Train the two-layer phase network on the synthetic angle task, then
/// evaluate with both inference backends.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NnConfig {
    pub task: hd_nn::SyntheticTaskConfig,
    /// Hidden layer width; input and class counts come from `task`.
    pub hidden: usize,
    pub hyper: hd_nn::Hyperparams,
    pub trials: u64,
    pub seed: u64,
    pub chaining: Chaining,
    pub drive: SpikeDriveConfig,
    /// `--check` floors: a trial passes when its post-training train and
    /// test accuracies (phase inference) clear these.
    pub min_train_accuracy: f64,
    pub min_test_accuracy: f64,
    /// `--check`: fraction of trials that must pass both floors.
    pub min_seed_fraction: f64,
    /// `--check`: mean phase-vs-oscillator class agreement on the test set.
    pub min_agreement: f64,
    #[serde(skip_serializing)]
    pub out: String,
}

impl Default for NnConfig {
    fn default() -> Self {
        Self {
            task: hd_nn::SyntheticTaskConfig::default(),
            hidden: 16,
            hyper: hd_nn::Hyperparams::default(),
            trials: 10,
            seed: 500,
            chaining: Chaining::ReEncode,
            drive: SpikeDriveConfig::default(),
            min_train_accuracy: 0.90,
            min_test_accuracy: 0.85,
            min_seed_fraction: 0.90,
            min_agreement: 0.95,
            out: "nn.csv".into(),
        }
    }
}

impl NnConfig {
    pub fn validate(&self) -> Result<()> {
        self.task
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.hyper
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.shapes()
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        self.drive
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn shapes(&self) -> hd_nn::LayerShapes {
        hd_nn::LayerShapes {
            inputs: self.task.dim,
            hidden: self.hidden,
            classes: self.task.classes,
        }
    }
}

/// A parsed, tagged experiment config.
#[derive(Debug, Clone)]
pub enum ExperimentConfig {
    OpError(OpErrorConfig),
    Graph(GraphConfig),
    Resonator(ResonatorConfig),
    Nn(NnConfig),
}

/// Experiment selector, shared by the CLI positional argument and the
/// config file's `experiment` tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    OpError,
    Graph,
    Resonator,
    Nn,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::OpError => "op-error",
            ExperimentKind::Graph => "graph",
            ExperimentKind::Resonator => "resonator",
            ExperimentKind::Nn => "nn",
        }
    }
}

impl ExperimentConfig {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            ExperimentConfig::OpError(_) => ExperimentKind::OpError,
            ExperimentConfig::Graph(_) => ExperimentKind::Graph,
            ExperimentConfig::Resonator(_) => ExperimentKind::Resonator,
            ExperimentConfig::Nn(_) => ExperimentKind::Nn,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::OpError(c) => c.validate(),
            ExperimentConfig::Graph(c) => c.validate(),
            ExperimentConfig::Resonator(c) => c.validate(),
            ExperimentConfig::Nn(c) => c.validate(),
        }
    }

    pub fn out(&self) -> &str {
        match self {
            ExperimentConfig::OpError(c) => &c.out,
            ExperimentConfig::Graph(c) => &c.out,
            ExperimentConfig::Resonator(c) => &c.out,
            ExperimentConfig::Nn(c) => &c.out,
        }
    }
}

/// Parse a config file. The JSON object carries an `experiment` tag naming
/// the variant; the remaining fields deserialize into that experiment's
/// struct with unknown fields rejected.
///
/// (Tag dispatch is done by hand because serde's internally-tagged enums
/// don't support `deny_unknown_fields`, and rejecting typos matters more
/// here than saving a few lines.)
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| HarnessError::Config("config must be a JSON object".into()))?;
    let tag = obj
        .remove("experiment")
        .ok_or_else(|| HarnessError::Config("missing \"experiment\" field".into()))?;
    let tag = tag
        .as_str()
        .ok_or_else(|| HarnessError::Config("\"experiment\" must be a string".into()))?
        .to_owned();

    let bad = |e: serde_json::Error| HarnessError::Config(format!("invalid {tag} config: {e}"));
    let config = match tag.as_str() {
        "op-error" => ExperimentConfig::OpError(serde_json::from_value(value).map_err(bad)?),
        "graph" => ExperimentConfig::Graph(serde_json::from_value(value).map_err(bad)?),
        "resonator" => ExperimentConfig::Resonator(serde_json::from_value(value).map_err(bad)?),
        "nn" => ExperimentConfig::Nn(serde_json::from_value(value).map_err(bad)?),
        other => {
            return Err(HarnessError::Config(format!(
                "unknown experiment {other:?} (expected op-error, graph, resonator, or nn)"
            )))
        }
    };
    Ok(config)
}

/// Command-line overrides applied on top of the parsed config. Overrides
/// that cannot mean anything for an experiment are rejected rather than
/// ignored, the same policy as unknown config fields.
pub struct Overrides {
    pub seed: Option<u64>,
    pub backend: Option<BackendChoice>,
    pub out: Option<String>,
}

pub fn apply_overrides(config: &mut ExperimentConfig, ov: &Overrides) -> Result<()> {
    if let Some(out) = &ov.out {
        match config {
            ExperimentConfig::OpError(c) => c.out = out.clone(),
            ExperimentConfig::Graph(c) => c.out = out.clone(),
            ExperimentConfig::Resonator(c) => c.out = out.clone(),
            ExperimentConfig::Nn(c) => c.out = out.clone(),
        }
    }
    if let Some(seed) = ov.seed {
        match config {
            ExperimentConfig::Graph(c) => c.seed = seed,
            ExperimentConfig::Resonator(c) => c.seed = seed,
            ExperimentConfig::Nn(c) => c.seed = seed,
            ExperimentConfig::OpError(_) => {
                return Err(HarnessError::Config(
                    "op-error has no random component; --seed does not apply".into(),
                ))
            }
        }
    }
    if let Some(backend) = ov.backend {
        match config {
            ExperimentConfig::Graph(c) => c.backend = backend,
            ExperimentConfig::Resonator(c) => c.backend = backend,
            ExperimentConfig::OpError(_) => {
                return Err(HarnessError::Config(
                    "op-error always compares the oscillator against the phase op; --backend does not apply".into(),
                ))
            }
            ExperimentConfig::Nn(_) => {
                return Err(HarnessError::Config(
                    "nn always evaluates both inference backends; --backend does not apply".into(),
                ))
            }
        }
    }
    Ok(())
}
