//! Library half of the `folner` binary: configuration, the example
//! catalog, report assembly, and the verification battery.  The binary
//! is a thin argument-parsing shell over these pieces so integration
//! tests can drive everything in process.

pub mod catalog;
pub mod config;
pub mod report;
pub mod runner;
pub mod verify;

use thiserror::Error;

/// Failure classes, mapped onto process exit codes by the binary:
/// configuration problems exit 2, horizon and numeric-budget problems
/// exit 3.  A verify run whose checks fail exits 1 without an error.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric horizon exceeded: {0}")]
    Horizon(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Horizon(_) => 3,
        }
    }
}
