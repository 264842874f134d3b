use thiserror::Error;

/// Errors produced by symbol construction and the phase-domain operations.
#[derive(Debug, Error, PartialEq)]
pub enum FhrrError {
    /// Symbols must have at least one element.
    #[error("symbol dimension must be at least 1")]
    ZeroDimension,

    /// Binary operations require operands of equal dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A phase value was NaN or infinite.
    #[error("non-finite phase at index {index}")]
    NonFinitePhase { index: usize },

    /// Bundling (or unbundling) received an empty input list.
    #[error("bundle requires at least one input symbol")]
    EmptyBundle,

    /// The complex superposition cancelled below the magnitude floor, so the
    /// resulting angle is undefined.
    #[error("degenerate phase: superposition magnitude below threshold at index {index}")]
    DegeneratePhase { index: usize },

    /// Weighted bundling requires one weight per input.
    #[error("weight count {weights} does not match input count {inputs}")]
    WeightCountMismatch { weights: usize, inputs: usize },

    /// The declared bundle size does not match the removed inputs.
    #[error("bundle size {m} inconsistent with {others} removed inputs")]
    BundleSizeMismatch { m: usize, others: usize },

    /// Unbundling found no angle consistent with the removed inputs.
    #[error("unbundle: no consistent preimage at index {index}")]
    NoPreimage { index: usize },

    /// A serialized record failed to parse.
    #[error("invalid symbol record: {0}")]
    InvalidRecord(String),
}
