use std::path::PathBuf;

use thiserror::Error;

use crate::trace::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_label}:{line}: {message}")]
    Parse {
        source_label: String,
        line: usize,
        message: String,
    },

    #[error("trace `{source_label}` failed validation: {}", summarize(.violations))]
    Validation {
        source_label: String,
        violations: Vec<Violation>,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no tested, executed classes in scope")]
    EmptyObservations,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this failure: 1 usage, 2 input/parse, 3 empty observation set.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) | Error::Config(_) => 1,
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::Io { .. }
            | Error::Degenerate(_) => 2,
            Error::InsufficientData(_) | Error::EmptyObservations => 3,
        }
    }
}

fn summarize(violations: &[Violation]) -> String {
    match violations {
        [] => "no violations".to_string(),
        [only] => only.to_string(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
    }
}
