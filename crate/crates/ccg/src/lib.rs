//! Scenario files, reports and command implementations for the `ccg` binary.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;
pub mod reproduce;
pub mod scenario;

pub use error::{CliError, EXIT_CHECK_FAILED};
pub use report::{Format, Report};
pub use scenario::Scenario;
