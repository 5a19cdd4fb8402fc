use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QibError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("state is not normalized: squared norm {norm_sqr}")]
    Normalization { norm_sqr: f64 },

    /// The probe has zero variance of the generator, so the quantum Fisher
    /// information vanishes and the auxiliary orthogonal state is undefined.
    #[error("degenerate state: generator variance is zero")]
    DegenerateState,

    #[error("symmetry violation: {0}")]
    Symmetry(String),

    #[error("conjugate symmetry violated at m index {index}: deviation {deviation:e}")]
    ConjugateSymmetry { index: usize, deviation: f64 },

    #[error("mirrored eigenvalue {eigenvalue} is absent from the spectrum")]
    MissingMirror { eigenvalue: f64 },

    #[error("mean {mean} lies below the lowest eigenvalue {minimum}")]
    MeanBelowMinimum { mean: f64, minimum: f64 },

    #[error("matrix is not Hermitian: defect {defect:e}")]
    NonHermitian { defect: f64 },

    #[error("matrix is not unitary: defect {defect:e}")]
    NonUnitary { defect: f64 },

    #[error("outcome {outcome} has probability {probability:e} below the support floor")]
    UnsupportedOutcome { outcome: usize, probability: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QibError>;
