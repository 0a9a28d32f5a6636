//! Experiment plumbing: config files, seeded runs, sweeps and charts.

use std::path::PathBuf;

use thiserror::Error;

use crate::metrics::MetricsError;
use crate::scenarios::ScenarioError;

pub mod config;
pub mod plot;
pub mod record;
pub mod run;
pub mod sweep;

pub use config::{RunConfig, ScenarioKind};
pub use plot::{plot_csv, render_svg};
pub use record::{format_value, read_records, write_records, MetricRecord};
pub use run::{execute, run_to_dir, MetricSummary, RunResult, RunSummary};
pub use sweep::{parse_vary, sweep, write_sweep, SweepResult, SweepSummary, Variation};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Plot(String),
}

impl RunnerError {
    /// Whether the failure stems from bad input rather than a failed run.
    pub fn is_config(&self) -> bool {
        matches!(self, RunnerError::Config(_) | RunnerError::Scenario(ScenarioError::Config(_)))
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| RunnerError::Io { path, source }
    }
}
