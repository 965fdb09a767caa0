use specmap::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    /// The command ran but its check failed (membership, tolerance).
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    /// 1 for malformed input, 2 for data that fail validation, 3 for
    /// numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Rejected(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(Error::Schema(_)) | CliError::Core(Error::KindMismatch(_)) => 1,
            CliError::Core(_) => 2,
        }
    }
}
