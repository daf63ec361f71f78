use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty matrix or vector")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("matrix is numerically zero")]
    DegenerateMatrix,
    #[error("affine set is empty (least-squares residual {residual:e})")]
    InfeasibleAffine { residual: f64 },
    #[error("polyhedron is empty or projection could not be certified")]
    Infeasible,
    #[error("{what}: {size} exceeds the supported limit of {limit}")]
    ScaleLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("problem has no optimal-set description")]
    MissingOptimalSet,
    #[error("iterates diverged at iteration {iteration}")]
    Diverged { iteration: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
