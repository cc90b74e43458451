//! Harness around the simulation engine: configuration, event and document
//! IO, the remote oracle client, fixture generation, and report emission.

pub mod config;
pub mod events;
pub mod fixtures;
pub mod graphdir;
pub mod remote;
pub mod report;

use std::process::ExitCode;

/// CLI failure classes, mapped onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Exit code 2: malformed inputs, bad config, failed invariants.
    #[error("{0}")]
    Validation(String),
    /// Exit code 3: the oracle could not produce a usable reply.
    #[error("oracle failure: {0}")]
    Oracle(String),
    /// Exit code 4: filesystem problems.
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(2),
            CliError::Oracle(_) => ExitCode::from(3),
            CliError::Io(_) => ExitCode::from(4),
        }
    }

    pub fn io(context: &str, err: std::io::Error) -> CliError {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl From<groupsim_core::runtime::RuntimeError> for CliError {
    fn from(err: groupsim_core::runtime::RuntimeError) -> CliError {
        use groupsim_core::hierarchy::HierarchyError;
        use groupsim_core::runtime::RuntimeError as R;
        match err {
            R::Oracle(e) => CliError::Oracle(e.to_string()),
            R::Hierarchy(HierarchyError::Oracle(e)) => CliError::Oracle(e.to_string()),
            R::Action(groupsim_core::action::ActionError::Oracle(e)) => {
                CliError::Oracle(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<groupsim_core::model::ModelError> for CliError {
    fn from(err: groupsim_core::model::ModelError) -> CliError {
        CliError::Validation(err.to_string())
    }
}

impl From<groupsim_core::hierarchy::HierarchyError> for CliError {
    fn from(err: groupsim_core::hierarchy::HierarchyError) -> CliError {
        match err {
            groupsim_core::hierarchy::HierarchyError::Oracle(e) => CliError::Oracle(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<groupsim_core::metrics::MetricsError> for CliError {
    fn from(err: groupsim_core::metrics::MetricsError) -> CliError {
        CliError::Validation(err.to_string())
    }
}

impl From<groupsim_core::oracle::OracleError> for CliError {
    fn from(err: groupsim_core::oracle::OracleError) -> CliError {
        CliError::Oracle(err.to_string())
    }
}
