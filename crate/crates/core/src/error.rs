use std::path::PathBuf;

/// Errors raised by the library. Each variant maps onto a stable CLI exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index {index} exceeds the configured window bound {bound}")]
    Size { index: u64, bound: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("certification did not converge below {cap} bits of precision")]
    Precision { cap: u32 },

    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
