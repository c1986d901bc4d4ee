use ccg_core::Error as CoreError;

use crate::scenario::ScenarioError;

/// Errors surfaced by the command line, each with a fixed exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input: scenario, contest spec, flag value. Exit code 2.
    #[error("{0}")]
    Parse(String),
    /// Outside the solvable model class. Exit code 3.
    #[error("{0}")]
    Unsupported(String),
    /// An exhaustive search would exceed the enumeration cap. Exit code 4.
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

/// Exit code when a reproduction or oracle check fails.
pub const EXIT_CHECK_FAILED: i32 = 5;

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::CapExceeded { .. } => CliError::Cap(msg),
            CoreError::UnsupportedNonMdu(_)
            | CoreError::NotMdu(_)
            | CoreError::EmptyMrd(_)
            | CoreError::NoEquilibriumFound
            | CoreError::ClosedFormInapplicable { .. } => CliError::Unsupported(msg),
            _ => CliError::Parse(msg),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Core(core) => core.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
