//! Command-line front end for `pillai-core`.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit code. Results go to the `out` writer; logs and streamed records go to
//! standard error.

mod args;
mod commands;
mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, Format};

pub const EXIT_OK: i32 = 0;
/// The command ran to completion but the outcome is negative (an audit or
/// verification item failed, or a search was interrupted).
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pillai_core::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pillai_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::Domain(_) | E::Hypothesis(_) | E::Size { .. }) => EXIT_USAGE,
            CliError::Core(E::Checkpoint { .. }) => EXIT_INTEGRITY,
            CliError::Core(E::Precision { .. }) => EXIT_PRECISION,
            CliError::Core(E::Io(_)) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => {
                EXIT_FAILED
            }
        }
    }
}

/// Parse `argv` (including the program name), run the command and return the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = e.print();
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
