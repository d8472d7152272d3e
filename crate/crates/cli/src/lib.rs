//! Command-line front end: file formats and the `wong`, `qpff`, `qpdff`
//! and `verify` commands.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError, Command};
