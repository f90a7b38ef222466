use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
