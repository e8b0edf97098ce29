//! Experiment harness for the `pnn` crate: parameter sweeps, DPNN and
//! identifier benchmarks, and theory tables, all written as CSV.

pub mod config;
pub mod experiment;

use thiserror::Error;

pub use config::{Command, ExperimentConfig, SweepVar};
pub use experiment::{run, write_csv, Report, Row, HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for infeasible parameters.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub(crate) fn from_csv(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<pnn::Error> for CliError {
    fn from(e: pnn::Error) -> Self {
        match e {
            pnn::Error::NoFeasibleK { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}
