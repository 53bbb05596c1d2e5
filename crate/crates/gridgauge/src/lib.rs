//! File formats, threaded evaluation and the `gridgauge` command line on top
//! of [`gridgauge_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod parallel;
pub mod report;

pub use error::{Error, ParseError};
pub use format::{fmt17, parse_grid, read_grid, write_grid};
pub use parallel::Parallel;
