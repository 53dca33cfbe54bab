//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration value.
    #[error("config error: {0}")]
    Config(String),

    /// Truncated Fock space cannot hold the result.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Numerical procedure failed to produce a usable result.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Sample set too ill-conditioned to orthonormalize.
    #[error("conditioning error: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
