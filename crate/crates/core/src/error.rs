use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable set mismatch: {0} vs {1}")]
    VarMismatch(String, String),
    #[error("inexact division")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("limit at t = 0 is undefined: {0}")]
    DegenerateLimit(String),
    #[error("not a monomial: {0}")]
    NotMonomial(String),
    #[error("polynomial is not positive: {0}")]
    NotPositive(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("direction {k} is frozen or out of range (mutable directions 1..={n})")]
    FrozenDirection { k: usize, n: usize },
    #[error("invalid exchange data: {0}")]
    InvalidExchangeData(String),
    #[error("cones {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("atlas was truncated at depth {0}; this operation needs a complete atlas")]
    Truncated(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
