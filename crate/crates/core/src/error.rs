use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("collision between bodies {first} and {second} (distance {distance:e})")]
    Collision {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("axis offsets must satisfy 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")]
    Ordering { r1: f64, r2: f64 },

    #[error("coefficient system is near-singular: determinant {determinant:e}, condition estimate {condition:e}")]
    SingularSystem { determinant: f64, condition: f64 },

    #[error("configuration is not centered: |sum m_j q_j| = {norm:e}")]
    NotCentered { norm: f64 },

    #[error("malformed input at {field}: {message}")]
    Format { field: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
