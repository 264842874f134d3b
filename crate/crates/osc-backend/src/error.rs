use thiserror::Error;

/// Errors produced by the oscillator backend.
#[derive(Debug, Error, PartialEq)]
pub enum OscError {
    #[error(transparent)]
    Fhrr(#[from] fhrr_core::FhrrError),

    /// Parameter set violates its invariants (sign, step size, horizon).
    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),

    /// Banks in one operation must share dimension.
    #[error("bank dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Banks (or a bank and its reference) disagree on frequency, damping,
    /// or the time they were sampled at; superposition would be meaningless.
    #[error("incompatible banks: {0}")]
    Incompatible(String),

    /// A state magnitude fell below the decode floor, so its angle is
    /// undefined.
    #[error("degenerate state on channel {channel}: magnitude below threshold")]
    DegenerateState { channel: usize },

    /// The reference oscillator itself decayed below the decode floor.
    #[error("degenerate reference oscillator: magnitude below threshold")]
    DegenerateReference,

    /// A spike train failed validation (ordering, range, or shape).
    #[error("invalid spike train: {0}")]
    InvalidSpikeTrain(String),

    /// The numeric state left the finite range during integration.
    #[error("integration diverged on channel {channel} at t = {t}")]
    IntegrationDiverged { channel: usize, t: f64 },

    /// Requested sample times are unusable (unsorted or before the bank's
    /// current time).
    #[error("invalid sample times: {0}")]
    InvalidSampleTimes(String),

    /// A serialized record failed to parse.
    #[error("invalid record: {0}")]
    InvalidRecord(String),
}
