use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("Hankel depth index {k} out of range for {len} samples")]
    InvalidDepth { k: usize, len: usize },

    #[error("subspace containment violated: {0}")]
    NotContained(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("system is not observable")]
    NotObservable,

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("invalid prior bounds: {0}")]
    InvalidBounds(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolated(String),

    #[error("identification failed: {0}")]
    IdentificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
