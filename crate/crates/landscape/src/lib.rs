//! File formats, reports and the `landscape` command-line interface on top of
//! [`landscape_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod report;
pub mod verify;

pub use error::{CliError, Result};
