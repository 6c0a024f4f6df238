use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("covariance matrix is not symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("block {block} is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { block: &'static str, min_eigenvalue: f64 },

    #[error("block {block} is singular")]
    SingularBlock { block: &'static str },

    #[error("invalid split index {split} for dimension {dim}")]
    InvalidSplit { split: usize, dim: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("CFL violation: dt={dt:.6e} exceeds dx/rho={limit:.6e}")]
    Cfl { dt: f64, limit: f64 },

    #[error("time integration became unstable at t={t:.6e} (norm growth {growth:.3e})")]
    Unstable { t: f64, growth: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("theorem hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("geometry parse error on line {line}: {message}")]
    Geometry { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
