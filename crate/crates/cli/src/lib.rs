//! Command-line front end and file formats for the concentration-bound
//! library: bound calculators, norm estimators, and seeded verification
//! campaigns with JSON/CSV/table reports.

pub mod args;
pub mod config;
pub mod io;
pub mod report;
pub mod run;

pub use run::{run, ExitStatus};

/// CLI failure modes, mapped onto process exit codes: domain errors exit 1,
/// configuration/IO errors exit 2.
#[derive(Debug)]
pub enum CliError {
    Domain(tailbound_core::Error),
    Config(String),
}

impl core::fmt::Display for CliError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Config(msg) => write!(f, "config error: {msg}"),
        }
    }
}

impl From<tailbound_core::Error> for CliError {
    fn from(e: tailbound_core::Error) -> Self {
        match e {
            tailbound_core::Error::Config(msg) => CliError::Config(msg),
            other => CliError::Domain(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
