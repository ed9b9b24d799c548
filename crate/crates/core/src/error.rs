use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step size {alpha} violates alpha * L < 1 (L = {lipschitz})")]
    StepSizeTooLarge { alpha: f64, lipschitz: f64 },

    #[error("non-finite value or gradient at iterate {iterate}")]
    NumericalFailure { iterate: usize },

    #[error("point is not critical: gradient norm {grad_norm:e} exceeds {tol:e}")]
    NotCritical { grad_norm: f64, tol: f64 },

    #[error("inverse map did not converge in {iterations} inner iterations (best residual {best_residual:e})")]
    InverseNotConverged { best_residual: f64, iterations: usize },

    #[error("final iterate is within tolerance of critical points {first} and {second}")]
    AmbiguousBasin { first: usize, second: usize },

    #[error("insufficient data for a rate fit: {usable} usable iterates, need {required}")]
    InsufficientData { usable: usize, required: usize },

    #[error("fitted contraction factor {0} is not in (0, 1)")]
    NonContracting(f64),

    #[error("check not applicable: {0}")]
    Inapplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
