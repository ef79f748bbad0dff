//! Crate-wide error type with a stable mapping to CLI exit codes.

use std::path::PathBuf;

use crate::simulate::ReadWriteTrace;

/// Exit codes used by the CLI: 0 success, 1 I/O, 2 validation/data, 3 user abort.
pub const EXIT_IO: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("duplicate id {id:?} (line {line})")]
    DuplicateId { id: String, line: usize },

    #[error("{0}")]
    InvalidData(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("API_KEY environment variable is not set")]
    MissingApiKey,

    #[error("authentication rejected by endpoint (status {status})")]
    AuthRejected { status: u16 },

    #[error("rate limited by endpoint (status 429)")]
    RateLimited,

    #[error("server error from endpoint (status {status})")]
    ServerError { status: u16 },

    #[error("transport failure: {0}")]
    Transport(String),

    #[error("retries exhausted after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: u32, last: String },

    #[error("agent failure after {} actions: {message}", trace.actions.len())]
    Agent {
        message: String,
        /// The partial trace accumulated before the failure.
        trace: Box<ReadWriteTrace>,
    },

    #[error("aborted: {0}")]
    Aborted(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidData(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), line, message: message.into() }
    }

    /// Exit code for the CLI contract. Transport problems count as I/O;
    /// anything that means the inputs or configuration were bad counts as data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Transport(_) | Error::RetriesExhausted { .. } => EXIT_IO,
            Error::Aborted(_) => EXIT_ABORT,
            _ => EXIT_DATA,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
