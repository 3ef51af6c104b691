//! File formats, configuration and verification suites for the `bruckloop`
//! command-line tool.
//!
//! Exit codes are part of the interface: `0` when every required property
//! passes, `1` when a property or a computation fails, `2` for usage and
//! configuration errors.

// Comparisons are written as `!(x <= tol)` so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod json;
pub mod suite;
pub mod text;

pub use config::{SuiteConfig, Validated};
pub use suite::{run_suite, SuiteReport};

/// Exit code of a passing run.
pub const EXIT_PASS: i32 = 0;
/// Exit code when a property or computation fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage and configuration errors.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Compute(#[from] bruckloop::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => EXIT_FAIL,
            _ => EXIT_CONFIG,
        }
    }
}
