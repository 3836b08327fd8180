//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by library operations.
///
/// The variants are coarse on purpose: the command-line front end maps each
/// of them to a distinct exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input (JSON, rational literals, identifiers).
    #[error("parse error: {0}")]
    Parse(String),
    /// An operation was called outside its domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A finite window is too small to represent the requested object.
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    /// A finite desk model cannot host the requested embedding.
    #[error("model too small: {0}")]
    ModelTooSmall(String),
    /// An input diagram or structure is internally inconsistent.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    /// A case outside the supported contract.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An exhaustive search exceeded its budget.
    #[error("search budget exceeded: {0}")]
    Budget(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
