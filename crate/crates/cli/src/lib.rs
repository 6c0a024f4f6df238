//! Configuration, scenario execution and verification suites behind the
//! `crescendo` binary.

pub mod cache;
pub mod config;
pub mod scenario;
pub mod verify;

use std::io;
use std::path::{Path, PathBuf};

pub use config::{parse_config, ModelCurve, ScenarioConfig, ScenarioKind};
pub use scenario::{run_scenario, run_scenario_in, Metric, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: crescendo_core::Error,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}
