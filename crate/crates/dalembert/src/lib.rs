//! File formats and the command-line front end for `dalembert-core`.

pub mod cli;
pub mod error;
pub mod formats;

pub use error::{CliError, Result};
