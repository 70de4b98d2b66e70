use thiserror::Error;

/// Failures of a command, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("search exhausted: {0}")]
    Exhausted(String),

    #[error("{0}")]
    Core(dessins_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<dessins_core::Error> for CliError {
    fn from(e: dessins_core::Error) -> Self {
        use dessins_core::Error as E;
        match e {
            E::SearchExhausted(msg) => CliError::Exhausted(msg),
            E::InvalidParameter(_) | E::Domain(_) => CliError::Usage(e.to_string()),
            other => CliError::Core(other),
        }
    }
}
