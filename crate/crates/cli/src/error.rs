use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{field}: {msg}")]
    Invalid { field: String, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] holevo::Error),
    #[error("{failed} of {total} golden checks failed")]
    GoldenFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 for solver non-convergence, 3 for failed golden checks, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(holevo::Error::NonConvergence { .. }) => 2,
            CliError::GoldenFailed { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
