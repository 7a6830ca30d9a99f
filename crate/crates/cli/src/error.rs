//! Error taxonomy for the command-line driver.
//!
//! Every variant maps to process exit code 2; `Fail` verdicts are not errors
//! (they exit 1 with a report on stdout).

use thiserror::Error;

/// Anything that prevents a command from producing a report.
#[derive(Debug, Error)]
pub enum CliError {
    /// The instance file was not valid JSON or did not match the schema.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// The instance file could not be read or the output could not be written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// The instance parsed but violated a library invariant (asymmetry,
    /// norm bound, dimension mismatch, missing dual, ...).
    #[error("validation error: {0}")]
    Validation(#[from] snlkit_core::SnlError),

    /// The instance is missing a field the command needs, or a flag value is
    /// out of range.
    #[error("command error: {0}")]
    Command(String),

    /// `fixtures` was asked for a name it does not know.
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),
}

impl CliError {
    /// Shorthand for a [`CliError::Command`] with a formatted message.
    pub fn command(msg: impl Into<String>) -> Self {
        CliError::Command(msg.into())
    }
}
