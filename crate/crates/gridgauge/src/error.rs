use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Stream(#[from] io::Error),
    #[error(transparent)]
    Core(#[from] gridgauge_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("solver did not converge: {0}")]
    NotConverged(&'static str),
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        use gridgauge_core::Error as Core;
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Stream(_) => exit::INPUT,
            Error::Usage(_) | Error::Threads(_) => exit::USAGE,
            Error::Core(Core::InvalidSpec(_)) => exit::USAGE,
            Error::Core(Core::Grid(_)) => exit::INPUT,
            Error::Core(_) | Error::NotConverged(_) => exit::NUMERICAL,
        }
    }
}
