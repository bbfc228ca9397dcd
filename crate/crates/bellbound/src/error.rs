use std::path::PathBuf;

/// Errors raised by the front end. Each maps onto one process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed protocol file {path}: {reason}")]
    ProtocolFile { path: PathBuf, reason: String },
    #[error("unknown protocol `{0}` (not a builtin name or an existing file)")]
    UnknownProtocol(String),
    #[error("invalid protocol: {0}")]
    InvalidInput(#[from] bellbound_core::Error),
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Invariant(_) => crate::EXIT_INVARIANT,
            Self::InvalidInput(bellbound_core::Error::InvariantBreach(_)) => crate::EXIT_INVARIANT,
            _ => crate::EXIT_USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
