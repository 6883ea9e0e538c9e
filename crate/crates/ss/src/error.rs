use freeloop_core::{GroebnerError, PolyError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("degree cap {cap} is too small: total degree {needed} is required")]
    CapTooSmall { cap: u32, needed: u32 },
    #[error("rank n = {0} is not supported (1 <= n <= 3)")]
    Unsupported(usize),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("kernel routes disagree: {0}")]
    RouteMismatch(String),
}
