//! IO companion to `nulldist-core`: scenario files, the experiment
//! runner, CSV/JSON/SVG emission, and the `nulldist` binary's plumbing.

use std::fmt;

pub mod expr;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod svg;

/// Process exit codes: 0 pass, 1 property failure, 2 input error,
/// 3 numeric failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    PropertyFailure = 1,
    InputError = 2,
    NumericFailure = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError {
            exit: ExitCode::InputError,
            message: msg.into(),
        }
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError {
            exit: ExitCode::NumericFailure,
            message: msg.into(),
        }
    }

    pub fn property(msg: impl Into<String>) -> Self {
        CliError {
            exit: ExitCode::PropertyFailure,
            message: msg.into(),
        }
    }

    /// Core errors raised while interpreting user input.
    pub fn from_core_input(e: nulldist_core::Error) -> Self {
        match e {
            nulldist_core::Error::Numeric { .. } | nulldist_core::Error::Unreachable(_) => {
                CliError::numeric(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }

    /// Core errors raised mid-computation.
    pub fn from_core_run(e: nulldist_core::Error) -> Self {
        match e {
            nulldist_core::Error::Numeric { .. } | nulldist_core::Error::Unreachable(_) => {
                CliError::numeric(e.to_string())
            }
            _ => CliError::numeric(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
