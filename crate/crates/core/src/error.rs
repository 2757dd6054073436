use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin basis: particle count must be at least 1 (got {0})")]
    InvalidBasis(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix must be square (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |U^dagger U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("state basis is not orthonormal: max |B^dagger B - 1| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("eigenphases must be sorted ascending")]
    Unsorted,

    #[error("{0}")]
    Domain(String),

    #[error("trajectory reached the coordinate pole: z = {z} at t = {t}")]
    PoleProximity { z: f64, t: f64 },

    #[error("system too large for the full-space computation: N = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
