use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite kernel value {value} at node pair ({i}, {j})")]
    NumericDomain { i: usize, j: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e}, target {target:e})"
    )]
    ConvergenceFailure { sweeps: usize, off_norm: f64, target: f64 },

    #[error("basis of order {basis_order} is too small: last eigenvalue moved by {shift:e} when enlarged")]
    ResolutionFailure { basis_order: usize, shift: f64 },

    #[error("eigenvalue of mode {k} is zero but lies inside the truncation cutoff")]
    DegenerateMode { k: usize },

    #[error("infeasible problem specification: {0}")]
    InfeasibleSpec(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("exact search limited to {limit} points, got {size}")]
    BudgetExceeded { size: usize, limit: usize },

    #[error("cannot classify continuity: {0}")]
    Unclassifiable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
