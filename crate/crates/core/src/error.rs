use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("singular basis: |det| = {det:e} below threshold {threshold:e}")]
    SingularBasis { det: f64, threshold: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("enumeration budget exceeded: {cells} candidate cells > budget {budget}")]
    EnumerationBudgetExceeded { cells: u128, budget: u64 },

    #[error("quadrature did not reach tolerance {tol:e} within {evaluations} evaluations (estimated error {estimate:e})")]
    QuadratureNonConvergence {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("region too small: {0}")]
    RegionTooSmall(String),

    #[error("test function support exceeds comb region")]
    SupportExceedsRegion,

    #[error("atom at {point:?} lies outside the comb region")]
    PointOutsideRegion { point: Vec<f64> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
