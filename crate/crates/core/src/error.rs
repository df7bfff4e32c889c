use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// Row and column are 1-based, counted as a spreadsheet would show them.
    #[error("non-numeric cell {value:?} at row {row}, column {column:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("non-finite value at row {row}, column {column:?}")]
    NonFinite { row: usize, column: String },

    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("response column {0:?} not found")]
    MissingResponse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("only {available} rows available, {needed} needed")]
    InsufficientRows { available: usize, needed: usize },

    #[error("response is constant; correlations are undefined")]
    ConstantResponse,

    #[error("cannot parse method descriptor {0:?}")]
    BadMethod(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
