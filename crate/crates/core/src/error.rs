use thiserror::Error;

/// Errors raised by the core engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("weight not dominant: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("weight has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("not a partition: {0:?}")]
    NotPartition(Vec<i64>),
    #[error("invalid flag factor: {0}")]
    InvalidFactor(String),
    #[error("plethysm unsupported: {0}")]
    PlethysmUnsupported(String),
    #[error("internal consistency check failed: {what}: {left} != {right}")]
    Inconsistent { what: String, left: String, right: String },
    #[error("non-integral value where an integer was expected: {0}")]
    NonIntegral(String),
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
