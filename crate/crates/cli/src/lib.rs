//! The `entrolab` front end: problem files in, exact JSON results out.
//!
//! A problem names a group, an endomorphism, a topology base and a task.
//! [`run::run_path`] executes a file, a batch or a directory of files;
//! [`selftest`] holds the exhaustive small-group suites behind
//! `entrolab selftest` and the acceptance target.

pub mod output;
pub mod problem;
pub mod run;
pub mod selftest;

use std::fmt;

/// Anything that stops a problem from producing a result.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CliError {
    /// Malformed or inconsistent problem data.
    Input(String),
    Core(entrolab_core::Error),
}

impl From<entrolab_core::Error> for CliError {
    fn from(e: entrolab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "{s}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}
