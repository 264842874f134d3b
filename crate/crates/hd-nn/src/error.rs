use fhrr_core::FhrrError;
use osc_backend::OscError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error(transparent)]
    Fhrr(#[from] FhrrError),

    #[error(transparent)]
    Osc(#[from] OscError),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A row's complex sum collapsed to (numerically) zero, so its output
    /// phase is undefined.
    #[error("degenerate row sum at output {row}: |sum| = {magnitude:e}")]
    DegenerateRow { row: usize, magnitude: f64 },

    /// Every sample in the batch hit a degenerate forward pass; there is
    /// nothing left to average a gradient over.
    #[error("every sample in the batch was degenerate; cannot take a step")]
    AllSamplesDegenerate,

    #[error("malformed weights file: {0}")]
    MalformedWeights(String),
}

pub type Result<T> = std::result::Result<T, NnError>;
