//! Command-line front end: file formats and subcommand dispatch.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;

use std::fs;

use args::{Cli, Mode};
use error::{CliError, CliResult};
use whitney_core::Rational;

/// Runs a parsed command line and returns the text it produces.
pub fn execute(cli: &Cli) -> CliResult<String> {
    let output = match cli.config.mode {
        Mode::Exact => commands::run::<Rational>(&cli.config, &cli.command)?,
        Mode::Float => commands::run::<f64>(&cli.config, &cli.command)?,
    };
    match &cli.config.out {
        Some(path) => {
            fs::write(path, &output).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(String::new())
        }
        None => Ok(output),
    }
}
