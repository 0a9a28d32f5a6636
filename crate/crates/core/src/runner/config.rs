//! Run configuration, read from TOML.
//!
//! ```toml
//! scenario = "geese"
//! seed = 7
//! steps = 2000
//! metrics = ["joint_entropy", "si_local"]
//!
//! [geese]
//! flock = 12
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunnerError;
use crate::scenarios::{AntConfig, AntsScenario, GeeseScenario, GooseConfig, PdConfig, PdScenario, Scenario};

/// Bins per sharpness axis unless configured otherwise.
pub const DEFAULT_BINS: usize = 21;

/// Metrics computed from the sharpness snapshot of every step.
pub const ORDER_METRICS: [&str; 4] = ["si_local", "si_global", "joint_entropy", "swarm_potential"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Ants,
    Geese,
    Pd,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Ants => "ants",
            ScenarioKind::Geese => "geese",
            ScenarioKind::Pd => "pd",
        }
    }

    /// Scalar metrics the scenario reports besides the order metrics.
    pub fn scalar_metrics(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::Ants => &["mean_route_efficiency", "food_delivered"],
            ScenarioKind::Geese => &["mean_utility"],
            ScenarioKind::Pd => &["cooperation_fraction"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    /// Required here or on the command line; runs are never seeded from the clock.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Steps for ants and geese, rounds for the dilemma.
    pub steps: u64,
    /// Metric names; order metrics expand per contradiction where relevant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<String>>,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_id: Option<String>,
    /// Dump the full world state of every step to `snapshots.jsonl`.
    #[serde(default)]
    pub snapshots: bool,
    #[serde(default)]
    pub ants: AntConfig,
    #[serde(default)]
    pub geese: GooseConfig,
    #[serde(default)]
    pub pd: PdConfig,
}

fn default_bins() -> usize {
    DEFAULT_BINS
}

impl RunConfig {
    pub fn new(scenario: ScenarioKind, seed: u64, steps: u64) -> Self {
        Self {
            scenario,
            seed: Some(seed),
            steps,
            metrics: None,
            bins: DEFAULT_BINS,
            out: None,
            run_id: None,
            snapshots: false,
            ants: AntConfig::default(),
            geese: GooseConfig::default(),
            pd: PdConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, RunnerError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| RunnerError::Config(e.to_string()))?;
        config.validate_shape()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, RunnerError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunnerError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            RunnerError::Config(m) => RunnerError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String, RunnerError> {
        toml::to_string(self).map_err(|e| RunnerError::Config(e.to_string()))
    }

    fn validate_shape(&self) -> Result<(), RunnerError> {
        if self.bins < 2 {
            return Err(RunnerError::Config(format!("bins must be at least 2, got {}", self.bins)));
        }
        if self.steps == 0 {
            return Err(RunnerError::Config("steps must be positive".into()));
        }
        let allowed = self.scenario.scalar_metrics();
        for m in self.metric_names() {
            if !ORDER_METRICS.contains(&m.as_str()) && !allowed.contains(&m.as_str()) {
                let mut known: Vec<&str> = ORDER_METRICS.to_vec();
                known.extend_from_slice(allowed);
                return Err(RunnerError::Config(format!(
                    "metric `{m}` is not available for {}; choose from {}",
                    self.scenario.name(),
                    known.join(", ")
                )));
            }
        }
        if self.metrics.as_ref().is_some_and(Vec::is_empty) {
            return Err(RunnerError::Config("metrics must not be empty".into()));
        }
        Ok(())
    }

    /// Checks everything a run needs, the seed included.
    pub fn validate(&self) -> Result<u64, RunnerError> {
        self.validate_shape()?;
        match self.scenario {
            ScenarioKind::Ants => self.ants.validate()?,
            ScenarioKind::Geese => self.geese.validate()?,
            ScenarioKind::Pd => self.pd.validate()?,
        }
        self.seed
            .ok_or_else(|| RunnerError::Config("a seed is required (config `seed` or --seed)".into()))
    }

    /// Requested metrics, or every metric of the scenario when none are listed.
    pub fn metric_names(&self) -> Vec<String> {
        match &self.metrics {
            Some(m) => m.clone(),
            None => ORDER_METRICS
                .iter()
                .chain(self.scenario.scalar_metrics())
                .map(|s| s.to_string())
                .collect(),
        }
    }

    pub fn run_id(&self, seed: u64) -> String {
        self.run_id.clone().unwrap_or_else(|| format!("{}-s{seed}", self.scenario.name()))
    }

    pub fn build(&self, seed: u64) -> Result<Box<dyn Scenario>, RunnerError> {
        Ok(match self.scenario {
            ScenarioKind::Ants => Box::new(AntsScenario::new(self.ants.clone(), seed)?),
            ScenarioKind::Geese => Box::new(GeeseScenario::new(self.geese.clone(), seed)?),
            ScenarioKind::Pd => Box::new(PdScenario::new(self.pd.clone(), seed)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = RunConfig::from_toml("scenario = \"pd\"\nseed = 3\nsteps = 10\n").unwrap();
        assert_eq!(c.bins, 21);
        assert_eq!(c.pd, PdConfig::default());
        assert!(c.metric_names().contains(&"cooperation_fraction".to_string()));
        assert_eq!(c.validate().unwrap(), 3);
        assert_eq!(c.run_id(3), "pd-s3");
    }

    #[test]
    fn seed_is_required() {
        let c = RunConfig::from_toml("scenario = \"geese\"\nsteps = 10\n").unwrap();
        assert!(matches!(c.validate(), Err(RunnerError::Config(_))));
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "scenario = \"bees\"\nsteps = 1\n",
            "scenario = \"pd\"\nsteps = 1\nmetrics = []\n",
            "scenario = \"pd\"\nsteps = 1\nmetrics = [\"mean_route_efficiency\"]\n",
            "scenario = \"pd\"\nsteps = 1\ncolour = 1\n",
            "scenario = \"pd\"\nsteps = 1\n[pd]\npopulaton = 5\n",
            "scenario = \"pd\"\nsteps = 0\n",
            "scenario = \"pd\"\nsteps = 1\nbins = 1\n",
        ] {
            assert!(RunConfig::from_toml(text).unwrap_err().is_config(), "{text}");
        }
    }

    #[test]
    fn section_errors_surface_on_validate() {
        let c = RunConfig::from_toml("scenario = \"geese\"\nseed = 1\nsteps = 5\n[geese]\nflock = 4\n").unwrap();
        assert!(c.validate().unwrap_err().is_config());
    }

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::new(ScenarioKind::Ants, 9, 50);
        c.metrics = Some(vec!["si_local".into()]);
        let back = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
