use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library and the sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A special-function argument outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// The sweep configuration is malformed or invalid.
    #[error("config error: {0}")]
    Config(String),

    /// An estimator gave up, e.g. too many solver failures across trials.
    #[error("estimator failure: {0}")]
    Estimator(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
