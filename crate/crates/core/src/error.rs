//! Crate-wide error type.
//!
//! Variants are grouped by how callers should react: `CsvFormat` /
//! `IrregularTimebase` / `Io` indicate bad input files, everything else a
//! violated precondition or numerical failure. The CLI maps the groups to
//! distinct exit codes.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is out of its documented domain (non-positive rate,
    /// overlap outside [0, 1), empty channel list, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested step size cannot resolve the fastest decay in the model.
    #[error("unstable integration: {0}")]
    UnstableIntegration(String),

    /// Too few samples for the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Sample variance is (numerically) zero, so moment ratios are undefined.
    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    /// A NaN or infinity showed up where a finite value is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// Malformed CSV content (header, field count, unparsable number, ...).
    #[error("csv format error{}: {message}", path_suffix(.path))]
    CsvFormat {
        path: Option<PathBuf>,
        message: String,
    },

    /// The time column is not a uniform grid.
    #[error("irregular timebase: {0}")]
    IrregularTimebase(String),

    /// A channel label was requested that the record does not contain.
    #[error("unknown channel: {0:?}")]
    UnknownChannel(String),

    /// An analysis window lies (partly) outside the record.
    #[error("window out of range: {0}")]
    WindowOutOfRange(String),

    #[error("i/o error{}: {source}", path_suffix(.path))]
    Io {
        path: Option<PathBuf>,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

fn path_suffix(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!(" in {}", p.display()),
        None => String::new(),
    }
}

impl Error {
    /// I/O failure tagged with the path involved.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: Some(path.into()),
            source,
        }
    }

    pub(crate) fn csv(path: Option<&std::path::Path>, message: impl Into<String>) -> Self {
        Error::CsvFormat {
            path: path.map(PathBuf::from),
            message: message.into(),
        }
    }

    /// True for errors that mean "the input file could not be parsed",
    /// as opposed to a violated precondition.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::CsvFormat { .. } | Error::IrregularTimebase(_) | Error::Io { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(source: std::io::Error) -> Self {
        Error::Io { path: None, source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
