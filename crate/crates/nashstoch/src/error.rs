//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Structural validation failure (dimension mismatch, invalid probabilities, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An operation was asked to pair a player with itself or repeat indices.
    #[error("invalid player pair: {0}")]
    InvalidPair(String),

    /// Text parse failure with source position.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// JSON schema violation, locating the offending element by JSON pointer.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    /// A requested construction would exceed a configured size cap.
    #[error("size error: {0}")]
    Size(String),

    /// Numerical failure (divergence, boundary evaluation, budget exhaustion).
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
