use egkm::EgkmError;

/// Harness-level failures, split by who is at fault: `Usage` means the
/// invocation itself is wrong, `Data` means the inputs could not be processed.
/// The split drives the process exit code (1 vs 2; panics exit 3).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<EgkmError> for CliError {
    fn from(err: EgkmError) -> Self {
        if err.is_usage() {
            CliError::Usage(err.to_string())
        } else {
            CliError::Data(err.to_string())
        }
    }
}
