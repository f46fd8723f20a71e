use thiserror::Error;

/// Errors produced by the gauge computation library.
#[derive(Debug, Error)]
pub enum GaugeError {
    /// Incompatible matrix or vector shapes.
    #[error("shape error: {0}")]
    Shape(String),

    /// An input failed a numerical validation (unitarity, Hermiticity,
    /// normalization, idempotence, scalar Dirac operator, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A connection has no decomposition witness, so it cannot be checked.
    /// Distinct from "checked and found false".
    #[error("unverifiable: {0}")]
    Unverifiable(String),

    /// An internal invariant of an already-constructed value no longer holds.
    #[error("corrupt state: {0}")]
    Corruption(String),
}

pub type Result<T> = std::result::Result<T, GaugeError>;
