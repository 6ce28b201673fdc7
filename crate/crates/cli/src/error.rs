use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] decoh_core::Error),
    #[error("resource: {0}")]
    Resource(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} measure(s) exceed the verification tolerance")]
    VerifyFailed(usize),
}

impl CliError {
    /// 0 success, 1 usage, 2 numerical failure, 3 resource.
    pub fn exit_code(&self) -> i32 {
        use decoh_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(E::Domain(_) | E::UnsupportedState(_)) => 1,
            CliError::Core(E::InsufficientTruncation { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Resource(_) | CliError::Io { .. } => 3,
            CliError::VerifyFailed(_) => 2,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
