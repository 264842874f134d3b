use thiserror::Error;

/// Harness failures, grouped by how the process should exit:
/// config problems are the caller's to fix (exit 2), run failures mean the
/// numerics diverged or a library invariant broke mid-experiment (exit 3),
/// and I/O failures are environmental (exit 1). `--check` threshold misses
/// are not errors — the binary reports them separately with exit 4.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("run failed: {0}")]
    Run(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Run(_) => 3,
            HarnessError::Io(_) => 1,
        }
    }
}

impl From<fhrr_core::FhrrError> for HarnessError {
    fn from(e: fhrr_core::FhrrError) -> Self {
        HarnessError::Run(e.to_string())
    }
}

impl From<osc_backend::OscError> for HarnessError {
    fn from(e: osc_backend::OscError) -> Self {
        HarnessError::Run(e.to_string())
    }
}

impl From<hd_algorithms::HdError> for HarnessError {
    fn from(e: hd_algorithms::HdError) -> Self {
        HarnessError::Run(e.to_string())
    }
}

impl From<hd_nn::NnError> for HarnessError {
    fn from(e: hd_nn::NnError) -> Self {
        HarnessError::Run(e.to_string())
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
