use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("matrix is singular")]
    Singular,

    #[error("polynomial has odd degree {0}; an even degree is required")]
    OddDegree(u32),

    #[error("density is negative at {point:?} (polynomial value {value:e})")]
    NegativeDensity { point: Vec<f64>, value: f64 },

    #[error("density does not integrate to a positive mass (constant Hermite coefficient {0:e})")]
    ZeroIntegral(f64),

    #[error("theta = {0} is outside the admissible range")]
    ThetaOutOfRange(f64),

    #[error("axis leading coefficients are not all positive")]
    ConditionFailed,

    #[error("leading form is not definite (minimum over the unit sphere {0:e})")]
    DegenerateLeadingForm(f64),

    #[error("no admissible theta: even theta = 1 - 1e-9 gives minimum {0:e}")]
    NoAdmissibleTheta(f64),

    #[error("theta = {theta} is inadmissible: rescaled polynomial reaches {min_value:e}")]
    ThetaInadmissible { theta: f64, min_value: f64 },

    #[error("density is not eligible for a normal-factor decomposition: {0}")]
    NotEligible(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no negative point found for n = 1..={0}")]
    NoWitnessFound(usize),

    #[error("quadrature order {order} too low; must exceed {required}")]
    QuadratureOrderTooLow { order: usize, required: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
