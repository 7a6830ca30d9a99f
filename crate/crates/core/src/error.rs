use thiserror::Error;

pub type Result<T> = std::result::Result<T, SnlError>;

#[derive(Debug, Clone, Error)]
pub enum SnlError {
    #[error("matrix not symmetric: |L[{row},{col}] - L[{col},{row}]| = {max_asymmetry:.3e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        max_asymmetry: f64,
    },
    #[error("spectral norm {norm} exceeds the nonexpansive bound 1 (tol {tol})")]
    NormExceedsOne { norm: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("pairing matrix is not an involution; the space has no dual of the same kind")]
    NoDual,
    #[error("subspace is not L-positive (witness value {witness_q:.6e})")]
    NotPositive { witness_q: f64 },
    #[error("subspace is not L-negative (witness value {witness_q:.6e})")]
    NotNegative { witness_q: f64 },
    #[error("operation requires a function of kind {expected}, got kind {got}")]
    WrongKind {
        expected: &'static str,
        got: &'static str,
    },
    #[error("relation is not monotone (witness value {witness_q:.6e})")]
    NotMonotone { witness_q: f64 },
    #[error("ambient dimension {dim} is odd; an (x, x*) splitting is required")]
    OddDimension { dim: usize },
    #[error("space does not carry the product (x, x*) pairing")]
    NotProductSpace,
    #[error("refinement precondition violated: duality gap {gap:.6e} exceeds eta^2 = {bound:.6e}")]
    PreconditionViolated { gap: f64, bound: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
