//! Command-line front end for `prabhakar-green`: the two example problems,
//! user-supplied data given as expressions, the verification suite, and the
//! `t,x,u` CSV format shared with downstream tools.

pub mod checks;
pub mod config;
pub mod csv;
pub mod expr;
pub mod run;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] prabhakar_green::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("verification failed: {}", .0.join(", "))]
    Verify(Vec<String>),
}

impl CliError {
    /// 2 for configuration problems, 1 for everything that fails while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}
