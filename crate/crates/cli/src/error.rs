use freeloop_core::{GroebnerError, PolyError};
use freeloop_ss::SsError;
use thiserror::Error;

/// Failures of a command, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Ss(#[from] SsError),
}

impl CliError {
    /// 2 input problems, 3 pair guard, 4 cap too small, 5 unsupported rank,
    /// 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Poly(_) => 2,
            CliError::Groebner(e) | CliError::Ss(SsError::Groebner(e)) => groebner_code(e),
            CliError::Ss(SsError::CapTooSmall { .. }) => 4,
            CliError::Ss(SsError::Unsupported(_)) => 5,
            CliError::Ss(SsError::Poly(_) | SsError::OutOfRange(_)) => 2,
            CliError::Ss(SsError::RouteMismatch(_)) => 1,
        }
    }
}

fn groebner_code(e: &GroebnerError) -> i32 {
    match e {
        GroebnerError::PairLimit(_) => 3,
        _ => 2,
    }
}
