//! Scenario files, field generation and result files.

pub mod fields;
pub mod file;
pub mod output;

use std::path::PathBuf;

use thiserror::Error;

use crate::physics::PhysicsError;
use crate::swarm::SwarmError;

pub use fields::{generate_fields, Category, FieldSpec, Fields};
pub use file::{load_scenario, GridConfig, InterventionConfig, OutputConfig, ScenarioFile, SCHEMA_VERSION};
pub use output::{read_curve, read_snapshot, read_timeseries, write_curve, write_snapshot, write_timeseries, Curve};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Swarm(#[from] SwarmError),
}

impl ScenarioError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Self + '_ {
        move |source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
