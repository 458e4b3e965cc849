use std::path::PathBuf;

use thiserror::Error;

use crate::coding::RllScheme;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{scheme} line-code violation in {unit} {index}: {found}")]
    LineCodeViolation {
        scheme: RllScheme,
        /// "pair" for Manchester, "group" for 4B6B.
        unit: &'static str,
        index: usize,
        found: String,
    },

    #[error("index {index} out of range for block of length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("invalid address {address}: network has {front_ends} front-ends")]
    InvalidAddress { address: usize, front_ends: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("empty report: transmitter count must be at least 1")]
    EmptyReport,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
