use thiserror::Error;

/// Errors produced by the Gaussian-state routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {dim} is not an even 2n")]
    OddDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asym:.3e})")]
    NotSymmetric { max_asym: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("invalid Gaussian state: smallest symplectic eigenvalue {min_eig} < 1")]
    InvalidState { min_eig: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix is too ill-conditioned (condition number {cond:.3e} above cap {cap:.3e})")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("state has no P-representation (A - I is not positive definite)")]
    NoPRepresentation,

    #[error("Fock truncation too small: trace deficit {deficit:.3e} exceeds cap {cap:.3e}")]
    TruncationTooSmall { deficit: f64, cap: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
