//! Scenario files in, deterministic CSV tables out.

pub mod catalog;
pub mod run;
pub mod scenario;

use biphoton_core::Error as CoreError;

pub use catalog::{list_scenarios, resolve, ScenarioEntry, Source, SCENARIO_PATH_ENV};
pub use run::{run_scenario, RunOptions, RunReport};
pub use scenario::{Output, Scenario};

/// Exit status for malformed scenario files.
pub const EXIT_SCHEMA: u8 = 2;
/// Exit status for physics failures.
pub const EXIT_PHYSICS: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Schema(String),
    #[error("{0}")]
    Physics(CoreError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Io { .. } => EXIT_SCHEMA,
            CliError::Physics(_) => EXIT_PHYSICS,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_schema() {
            CliError::Schema(e.to_string())
        } else {
            CliError::Physics(e)
        }
    }
}

impl From<toml::de::Error> for CliError {
    fn from(e: toml::de::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
