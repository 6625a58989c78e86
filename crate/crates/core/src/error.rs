//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Schatten exponent {p}: p must lie in [1, inf]")]
    InvalidExponent { p: f64 },

    #[error("matrix is not symmetric: |A[{i}][{j}] - A[{j}][{i}]| = {defect:e} exceeds tolerance")]
    NotSymmetric { i: usize, j: usize, defect: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("non-finite entry at position {position}")]
    NonFinite { position: usize },

    #[error("operation requires centered measures but a mean has norm {mean_norm:e}")]
    NotCentered { mean_norm: f64 },

    #[error("profile count must satisfy n <= d: n = {n}, d = {d}")]
    EmbeddingTooSmall { n: usize, d: usize },

    #[error("need at least {min} dimensions, got {got}")]
    TooFewDims { min: usize, got: usize },

    #[error("dimension list must be strictly increasing")]
    DimsNotIncreasing,

    #[error("center list is empty")]
    EmptyCenters,

    #[error("test function violates the derivative constraint: sup = {sup}")]
    ConstraintViolated { sup: f64 },

    #[error("count must be at least {min}, got {got}")]
    CountTooSmall { min: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
