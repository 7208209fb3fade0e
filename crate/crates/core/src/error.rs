//! Error type shared by every layer.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    Characteristic2,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} is too large")]
    PrimeTooLarge(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(i64, u32),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("{0} is not finite dimensional")]
    NotFiniteDimensional(String),
    #[error("unknown module {0}")]
    UnknownModule(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("no such morphism: {0}")]
    NoMorphism(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
