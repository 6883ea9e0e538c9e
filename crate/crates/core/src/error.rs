use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials or power products belong to different contexts")]
    ContextMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid variable name")]
    BadVariableName(String),
    #[error("variable ranking must mention every variable exactly once")]
    IncompleteRanking,
    #[error("cannot parse order descriptor `{0}` (expected lex:a>b or elim[k]:a>b)")]
    BadOrder(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at byte {pos}: expected {expected}, found {found}")]
    Parse { pos: usize, expected: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("input contains the zero polynomial")]
    ZeroInput,
    #[error("truncation requested but `{0}` is not homogeneous for the given weights")]
    NotHomogeneous(String),
    #[error("context already contains the reserved elimination variable `{0}`")]
    ReservedVariable(String),
    #[error("completion exceeded the guard of {0} critical pairs")]
    PairLimit(usize),
}
