use thiserror::Error;

/// Errors shared across the walk engines and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size parameter for {family}: {reason}")]
    InvalidSize { family: &'static str, reason: String },

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("coin parameter out of range: {0}")]
    CoinParameter(String),

    #[error("coin dimension {coin} does not match vertex degree {degree} at vertex {vertex}")]
    CoinDegreeMismatch {
        coin: usize,
        degree: usize,
        vertex: usize,
    },

    #[error("graph is not regular: vertex {vertex} has {degree} ports, expected {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("edge labeling does not induce a unitary shift: label {label} maps vertices {first} and {second} to the same target")]
    NonUnitaryShift {
        label: usize,
        first: usize,
        second: usize,
    },

    #[error("state amplitudes are not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("walk support reached the line-window boundary; widen the window")]
    WindowOverflow,

    #[error("absorbing boundary set is empty or contains the start vertex")]
    BadBoundary,

    #[error("distributions have mismatched support ({left} vs {right} entries)")]
    SupportMismatch { left: usize, right: usize },

    #[error("distribution mass {mass} is not 1 within tolerance")]
    MassNotUnit { mass: f64 },

    #[error("matrix is not symmetric/stochastic as required: {0}")]
    BadMatrix(String),

    #[error("linear system is singular (target unreachable or chain disconnected)")]
    SingularSystem,

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("time series invalid: {0}")]
    BadSeries(String),

    #[error("dimension cap exceeded: requested {requested}, cap {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("formula is malformed: {0}")]
    BadFormula(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
