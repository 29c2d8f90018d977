//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the exact-arithmetic toolkit.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Malformed or out-of-range input (bad partition, unknown format, ...).
    #[error("input error: {0}")]
    Input(String),
    /// Operands of incompatible sizes.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Input outside the mathematical domain of the operation
    /// (e.g. a non-nilpotent matrix passed to a Jordan-type computation).
    #[error("domain error: {0}")]
    Domain(String),
    /// A claimed relation between inputs does not hold
    /// (e.g. the second partition is not a dominance cover of the first).
    #[error("relation error: {0}")]
    Relation(String),
    /// A bounded search or truncated computation exceeded its budget.
    #[error("resource error: {0}")]
    Resource(String),
    /// An invariant the library guarantees internally was violated.
    #[error("internal consistency error: {0}")]
    Internal(String),
    /// Fixture files missing or malformed.
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
