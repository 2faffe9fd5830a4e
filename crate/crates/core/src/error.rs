use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("spin basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch {
        expected: crate::SpinBasis,
        found: crate::SpinBasis,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value at component {component}, radial {radial}, angular {angular}")]
    NonFinite {
        component: usize,
        radial: usize,
        angular: usize,
    },

    #[error("zero field has no normalized expectation value")]
    ZeroField,

    #[error("invalid Landau parameters: {0}")]
    InvalidLandau(String),

    #[error("radial window too small: tail ratio {ratio:e} exceeds {limit:e}")]
    TailBound { ratio: f64, limit: f64 },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("malformed field dump: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
