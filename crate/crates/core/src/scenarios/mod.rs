//! Concrete swarms: foraging ants, a migrating goose flock, and a spatial
//! prisoner's dilemma.

use serde_json::Value;
use thiserror::Error;

use crate::behavior::BehaviorError;
use crate::contradiction::ModelError;
use crate::environment::EnvError;
use crate::metrics::SwarmSnapshot;

pub mod ants;
pub mod geese;
pub mod pd;

pub use ants::{AntConfig, AntsScenario};
pub use geese::{GeeseScenario, GooseConfig};
pub use pd::{Counterfactual, PdConfig, PdScenario};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Environment(#[from] EnvError),
}

/// A simulation advanced one step at a time.
pub trait Scenario: Send {
    /// Contradictions every agent carries, in snapshot order.
    fn contradiction_names(&self) -> Vec<String>;

    fn step(&mut self) -> Result<(), ScenarioError>;

    /// Number of completed steps.
    fn steps_done(&self) -> u64;

    /// Current sharpness of every agent on every contradiction.
    fn snapshot(&self) -> SwarmSnapshot;

    /// Scenario-specific metrics, by name. Undefined values are omitted.
    fn scalar_metrics(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    /// Full world state for debugging dumps.
    fn world_state(&self) -> Value;
}
