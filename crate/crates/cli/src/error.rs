use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}: {source}")]
    Core { context: String, source: gcore::Error },
    #[error("{0}")]
    OracleMismatch(String),
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(gcore::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    /// 2 input validation, 3 numerical failure, 4 oracle mismatch.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => 2,
            CliError::Core { source, .. } if source.is_numerical() => 3,
            CliError::Core { .. } => 2,
            CliError::OracleMismatch(_) => 4,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
