use thiserror::Error;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A shift would have moved a nonzero amplitude off the finite lattice.
    #[error("boundary leak: nonzero amplitude {magnitude:e} at lattice index {index} would leave the lattice")]
    BoundaryLeak { index: usize, magnitude: f64 },

    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, WalkError>;

pub(crate) fn invalid(msg: impl Into<String>) -> WalkError {
    WalkError::InvalidArgument(msg.into())
}
