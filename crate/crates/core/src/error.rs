use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected} inputs, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("resource cap exceeded: {requested} nodes requested, cap is {cap}")]
    ResourceCap { requested: usize, cap: usize },

    #[error("Hölder weight diverges: eps * q' = {0} is not below 2")]
    HolderDivergence(f64),

    #[error("exponent point is not in {0}")]
    NotOnBoundary(String),

    #[error(
        "resolution guard: support scale {scale:e} is below quadrature resolution {resolution:e}"
    )]
    Resolution { scale: f64, resolution: f64 },

    #[error("functions with unbounded support need explicit t-grid bounds")]
    UnboundedSupport,

    #[error("unsupported dimension m = {0}")]
    UnsupportedDimension(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
