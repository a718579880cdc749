use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, WalkError>;

/// Errors raised by state construction, operator construction and analysis.
///
/// Evolution itself is total: once a state and a coin exist, every step is
/// defined, so only constructors and statistics functions return `Result`.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("coin amplitudes are not normalized: |up|^2 + |down|^2 = {norm_sq}")]
    UnnormalizedCoin { norm_sq: f64 },

    #[error("position {position} is outside {topology}")]
    PositionOutOfRange { position: i64, topology: String },

    #[error("cycle needs at least 3 sites, got {0}")]
    CycleTooSmall(usize),

    #[error("absorbing boundaries need at least one interior site: got left={left}, right={right}")]
    InvalidAbsorbingBounds { left: i64, right: i64 },

    #[error("line segment needs at least 2 vertices, got {0}")]
    SegmentTooSmall(usize),

    #[error("coin matrix is not unitary: max |C^dag C - I| = {defect:.3e}")]
    NonUnitaryCoin { defect: f64 },

    #[error("transition rate gamma must be positive, got {0}")]
    NonPositiveGamma(f64),

    #[error("vector norm is {0}, expected 1")]
    UnnormalizedVector(f64),

    #[error("not a probability vector: {0}")]
    NotAProbabilityVector(String),

    #[error("vector length {actual} does not match the {expected} graph vertices")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("distribution has no entries")]
    EmptyDistribution,

    #[error("log-log fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("step counts must be positive and strictly increasing")]
    InvalidStepSequence,

    #[error("variance must be positive to fit a log-log slope, got {0}")]
    NonPositiveVariance(f64),

    #[error("matrix is not Hermitian: max |entry - conj(transpose)| = {0:.3e}")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    TraceNotOne(f64),

    #[error("density matrix has negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),

    #[error("amplitude is not finite")]
    NonFiniteAmplitude,
}
