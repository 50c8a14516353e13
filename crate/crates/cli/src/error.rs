use channellab_core::Error as CoreError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or an unreadable/malformed input document.
    #[error("{0}")]
    Usage(String),
    /// The input is well formed but fails a validity check or a hypothesis.
    #[error("{0}")]
    Validation(String),
    /// A solver failed or two independent computations disagree.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::DimensionMismatch(_)
            | CoreError::NotSquare { .. }
            | CoreError::InvalidParameter(_)
            | CoreError::Unknown(_) => CliError::Usage(msg),
            CoreError::InvalidState(_) | CoreError::InvalidChannel(_) | CoreError::Precondition(_) => {
                CliError::Validation(msg)
            }
            CoreError::NoConvergence { .. }
            | CoreError::NotHermitian(_)
            | CoreError::NegativeEigenvalue(_)
            | CoreError::Inconsistency(_) => CliError::Numerical(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
