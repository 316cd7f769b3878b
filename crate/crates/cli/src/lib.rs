//! Command-line front end for `leakbound-core`: file formats, scenario
//! files and the subcommands of the `leakbound` binary.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod scenario;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, Result};
