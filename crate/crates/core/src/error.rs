use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator has no support (zero operator)")]
    NoSupport,

    #[error("state is locally determined; no reduction family exists")]
    Determined,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
