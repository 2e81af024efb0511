use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The request is valid but exceeds a configured scan cap.
    #[error("capability error: {0}")]
    Capability(String),
    /// Input bytes could not be interpreted.
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
