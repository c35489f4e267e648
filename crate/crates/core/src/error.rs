use thiserror::Error;

/// Errors raised by the basis constructors, evaluators and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("polar frame is undefined at the origin")]
    FrameUndefined,
    #[error("singular at the origin, use the scaled form: {0}")]
    UseScaledForm(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("size error: {0}")]
    Size(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
