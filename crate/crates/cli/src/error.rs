//! CLI error type and the exit-code contract.
//!
//! Exit codes: 0 success, 2 validation failure (bad input, violated
//! precondition), 3 numerical failure (solver breakdown), 4 invariant-suite
//! failure.

use beable_core::linalg::LinalgError;
use beable_core::segalgebra::AlgebraError;
use beable_core::states::StateError;
use beable_core::{BeableError, JsonError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON in {path} at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    /// Exit 4 (failed invariant suite) is not an error value: the runner
    /// prints the full report and sets the code itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn parse(path: &str, err: &serde_json::Error) -> CliError {
        CliError::Parse {
            path: path.to_string(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

/// Solver breakdowns are numerical (exit 3); everything else a library can
/// report about its inputs is a validation problem (exit 2).
fn linalg_is_numerical(err: &LinalgError) -> bool {
    matches!(
        err,
        LinalgError::EigNonConvergence { .. }
            | LinalgError::SpectralInvariant { .. }
            | LinalgError::FunctionUndefined { .. }
    )
}

impl From<LinalgError> for CliError {
    fn from(err: LinalgError) -> Self {
        if linalg_is_numerical(&err) {
            CliError::Numerical(err.to_string())
        } else {
            CliError::Validation(err.to_string())
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(err: AlgebraError) -> Self {
        match err {
            AlgebraError::Linalg(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(err: StateError) -> Self {
        match err {
            StateError::Linalg(inner) => inner.into(),
            StateError::Algebra(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<BeableError> for CliError {
    fn from(err: BeableError) -> Self {
        match err {
            BeableError::Linalg(inner) => inner.into(),
            BeableError::Algebra(inner) => inner.into(),
            BeableError::State(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<JsonError> for CliError {
    fn from(err: JsonError) -> Self {
        match err {
            JsonError::Linalg(inner) => inner.into(),
            JsonError::Algebra(inner) => inner.into(),
            JsonError::State(inner) => inner.into(),
            shape => CliError::Validation(shape.to_string()),
        }
    }
}
