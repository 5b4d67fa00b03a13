//! File formats, reports and command implementations for the `convlab`
//! binary.

pub mod commands;
pub mod format;
pub mod report;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line, msg: msg.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] convlab_core::Error),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    True = 0,
    False = 1,
    Infeasible = 2,
    InputError = 3,
}

impl CliError {
    pub fn status(&self) -> Status {
        use convlab_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => Status::InputError,
            CliError::Core(E::Infeasible { .. } | E::SearchExhausted { .. } | E::FieldTooSmall { .. }) => {
                Status::Infeasible
            }
            CliError::Core(E::Internal(_)) => Status::False,
            CliError::Core(_) => Status::InputError,
        }
    }
}
