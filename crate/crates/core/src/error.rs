use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("no admissible chain between cubes {from} and {to}")]
    NoChain { from: usize, to: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("bad parameter `{key}`: {reason}")]
    BadParam { key: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
