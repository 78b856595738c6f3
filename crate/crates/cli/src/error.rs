use std::io;

use thiserror::Error;

/// Exit-code contract: 0 pass, 1 assertion failure, 2 usage, 3 resource, 4 I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] walsh_hardy::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("malformed input: {0}")]
    BadInput(String),
    #[error("{0} check(s) failed")]
    Assertion(usize),
}

impl CliError {
    pub fn usage(flag: &str, message: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("invalid value for --{flag}: {message}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => 1,
            CliError::Usage(_) | CliError::BadInput(_) => 2,
            CliError::Core(walsh_hardy::Error::ResolutionTooLarge { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 4,
        }
    }
}
