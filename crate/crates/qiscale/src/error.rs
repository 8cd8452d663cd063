use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qiscale_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::Failed(_) => "VerificationFailed",
            CliError::Format(_) => "Format",
            CliError::Io(_) | CliError::Csv(_) => "Io",
        }
    }

    /// The machine-readable form written to stderr.
    pub fn to_json(&self) -> Value {
        json!({ "error": self.code(), "message": self.to_string() })
    }
}
