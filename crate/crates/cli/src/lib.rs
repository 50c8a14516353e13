//! File formats, JSON reports and subcommands for the `channellab` tool.

pub mod commands;
pub mod doc;
pub mod error;
pub mod json;

pub use error::{CliError, CliResult};
