use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration (bad dimensions, empty class sets, out-of-range values).
    #[error("configuration error: {0}")]
    Config(String),

    /// Tensor shape mismatch at an API boundary.
    #[error("shape error: {0}")]
    Shape(String),

    /// Input data violates a precondition (empty batch, missing class, bad label).
    #[error("data error: {0}")]
    Data(String),

    /// Non-finite value where a finite one is required.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Malformed feature file or checkpoint payload.
    #[error("format error: {msg} (byte offset {offset})")]
    Format { offset: u64, msg: String },

    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}: {msg}")]
    Training { epoch: usize, msg: String },

    /// Checkpoint header/payload does not match the expected schema.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
    pub fn format(offset: u64, msg: impl Into<String>) -> Self {
        Error::Format {
            offset,
            msg: msg.into(),
        }
    }
}
