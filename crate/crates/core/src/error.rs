use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("boundary of a degree-0 chain is undefined; use degree_b0")]
    DegreeZeroBoundary,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: i64, got: i64 },
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("orientation error: {0}")]
    Orientation(String),
    #[error("cochain is not closed")]
    NotClosed,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("coefficients are not integers")]
    NotIntegral,
    #[error("invalid flat class: coboundary of r is not integral")]
    InvalidFlatClass,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("coupling must be an integer")]
    Coupling,
    #[error("unknown manifold: {0}")]
    UnknownManifold(String),
    #[error("linear system has no solution: {0}")]
    Infeasible(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
