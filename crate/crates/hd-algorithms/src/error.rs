use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HdError {
    #[error(transparent)]
    Fhrr(#[from] fhrr_core::FhrrError),

    #[error(transparent)]
    Osc(#[from] osc_backend::OscError),

    /// A structural precondition failed (probability range, node counts,
    /// minimum dimension, sample-class balance, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A codebook index points outside its factor set.
    #[error("factor {factor}: index {index} out of range for codebook of {size}")]
    IndexOutOfRange {
        factor: usize,
        index: usize,
        size: usize,
    },
}
