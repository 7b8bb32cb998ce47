//! Library surface of the `picexp` binary: input parsing, the per-curve and
//! per-cover pipelines, report shaping, and the sweep driver. The binary is
//! a thin argument layer over these, and the integration tests drive the
//! same entry points.

pub mod input;
pub mod pipeline;
pub mod report;
pub mod sweep;

use std::fmt;

/// Failures split by exit code: bad input is the caller's problem (exit 1),
/// an internal inconsistency is ours (exit 3). Bound violations are not
/// errors; they surface as a `Ok(2)` process status from the sweep.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<picexp_core::Error> for CliError {
    fn from(e: picexp_core::Error) -> Self {
        match e {
            picexp_core::Error::ConsistencyFailure { .. } => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 3,
        }
    }
}
