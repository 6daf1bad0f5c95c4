//! Crate-wide error type and result alias.

use std::path::PathBuf;

/// Errors produced by any part of the pipeline.
///
/// The CLI maps these onto exit codes: [`SafeError::Numeric`] becomes 3,
/// everything else is a data/format failure and becomes 2. Usage errors
/// (bad flags) never reach this type.
#[derive(Debug, thiserror::Error)]
pub enum SafeError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bad magic: expected \"SAFT\", found {found:?}")]
    BadMagic { found: [u8; 4] },

    #[error("unknown dtype code {0}")]
    UnknownDtype(u8),

    #[error("unsupported container version {0}")]
    BadVersion(u8),

    #[error("tensor rank {0} out of range (must be 1..=4)")]
    BadRank(u8),

    #[error("truncated container: expected {expected} payload bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("external command failed: {0}")]
    External(String),
}

impl SafeError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SafeError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, SafeError>;
