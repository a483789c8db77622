//! Library side of the `gaugefield` CLI: config schema, command
//! implementations, and table formats. The binary in `main.rs` is a thin
//! argument-parsing shell over this, which keeps everything testable.

use thiserror::Error;

pub mod commands;
pub mod config;
pub mod table;

/// Failures grouped by exit code: config/usage errors exit 2, numerical
/// failures exit 3. Verification failures are not errors; `cmd_verify`
/// reports them through its pass flag (exit 1).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}
