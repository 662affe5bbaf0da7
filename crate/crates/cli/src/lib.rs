//! Command-line front end: parses arguments, runs one computation, and
//! writes its CSV/JSON/SVG artifacts plus a `manifest.json` into a fresh run
//! directory.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod manifest;
pub mod output;
pub mod svg;

pub use args::{Cli, Command};
pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] pslab_core::Error),

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("json: {0}")]
    Json(serde_json::Error),

    #[error("plot: {0}")]
    Plot(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn csv(path: &Path, source: csv::Error) -> Self {
        CliError::Csv { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        }
    }
}

/// Parses `argv` (program name first) and runs the command. Returns the
/// process exit status: 0 success, 1 domain or I/O error, 2 usage error.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::execute(&cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.dir.display());
            for line in &outcome.summary {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
