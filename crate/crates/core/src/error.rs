use thiserror::Error;

/// Errors produced by the depth toolbox.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a norm: p = {0} (need p >= 1)")]
    NotANorm(f64),
    #[error("invalid depth specification: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sample has no projection scatter")]
    NoProjectionScatter,
    #[error("locality too small: the neighbourhood contains no sample point")]
    LocalityTooSmall,
    #[error("all depth weights are zero")]
    ZeroWeights,
    #[error("exact volume unsupported above 3D (got d = {0})")]
    UnsupportedDimension(usize),
    #[error("vertical data: all x values are equal")]
    VerticalData,
    #[error("row index {index} is out of range or repeated (combined sample has {len} rows)")]
    Membership { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
