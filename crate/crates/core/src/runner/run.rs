//! A single seeded run.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::record::{round_sig, write_records, MetricRecord};
use super::RunnerError;
use crate::metrics::{
    assertion1_report, bin_sharpness, joint_entropy, si_global, si_local, swarm_potential, BinnedDistribution,
    PairOutcome, SwarmSnapshot,
};
use crate::scenarios::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub first: f64,
    pub last: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Verdict of the potential/order co-monotonicity check on one contradiction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion1Verdict {
    pub pass: bool,
    pub checked: usize,
    pub skipped: usize,
    pub violated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    pub scenario: String,
    pub seed: u64,
    pub steps: u64,
    pub bins: usize,
    pub metrics: BTreeMap<String, MetricSummary>,
    pub assertion1: BTreeMap<String, Assertion1Verdict>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub records: Vec<MetricRecord>,
    pub summary: RunSummary,
    /// World states, one JSON line per step, when requested.
    pub snapshots: Option<Vec<String>>,
}

struct Recorder<'a> {
    config: &'a RunConfig,
    run_id: String,
    seed: u64,
    names: Vec<String>,
    records: Vec<MetricRecord>,
    /// Binned sharpness per contradiction per step, for the assertion check.
    history: BTreeMap<String, Vec<BinnedDistribution>>,
}

impl Recorder<'_> {
    fn push(&mut self, step: u64, metric: String, value: f64) {
        self.records.push(MetricRecord {
            run_id: self.run_id.clone(),
            seed: self.seed,
            step,
            metric,
            value,
        });
    }

    fn observe(&mut self, scenario: &dyn Scenario) -> Result<(), RunnerError> {
        let step = scenario.steps_done();
        let snapshot: SwarmSnapshot = scenario.snapshot();
        let contradictions = scenario.contradiction_names();
        let refs: Vec<&str> = contradictions.iter().map(String::as_str).collect();
        let bins = self.config.bins;
        let mut dists = BTreeMap::new();
        for c in &contradictions {
            let dist = bin_sharpness(&snapshot.values(c), bins)?;
            self.history.entry(c.clone()).or_default().push(dist.clone());
            dists.insert(c.clone(), dist);
        }
        let scalars: BTreeMap<String, f64> = scenario.scalar_metrics().into_iter().collect();
        for name in self.names.clone() {
            match name.as_str() {
                "si_local" => {
                    for (c, d) in &dists {
                        self.push(step, format!("si_local.{c}"), si_local(d)?);
                    }
                }
                "swarm_potential" => {
                    for (c, d) in &dists {
                        self.push(step, format!("swarm_potential.{c}"), swarm_potential(d));
                    }
                }
                "joint_entropy" => {
                    let h = joint_entropy(&snapshot, &refs, bins)?;
                    self.push(step, name, h);
                }
                "si_global" => {
                    let si = si_global(&snapshot, &refs, bins)?;
                    self.push(step, name, si);
                }
                other => {
                    if let Some(v) = scalars.get(other) {
                        self.push(step, name, *v);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Runs the configured scenario in memory. `seed` overrides the config.
pub fn execute(config: &RunConfig, seed: Option<u64>) -> Result<RunResult, RunnerError> {
    let mut config = config.clone();
    if seed.is_some() {
        config.seed = seed;
    }
    let seed = config.validate()?;
    let mut scenario = config.build(seed)?;
    let mut rec = Recorder {
        config: &config,
        run_id: config.run_id(seed),
        seed,
        names: config.metric_names(),
        records: Vec::new(),
        history: BTreeMap::new(),
    };
    let mut snapshots = config.snapshots.then(Vec::new);
    let dump = |s: &dyn Scenario, out: &mut Option<Vec<String>>| -> Result<(), RunnerError> {
        if let Some(lines) = out {
            let line = serde_json::json!({ "step": s.steps_done(), "state": s.world_state() });
            lines.push(serde_json::to_string(&line)?);
        }
        Ok(())
    };
    rec.observe(scenario.as_ref())?;
    dump(scenario.as_ref(), &mut snapshots)?;
    for _ in 0..config.steps {
        scenario.step()?;
        rec.observe(scenario.as_ref())?;
        dump(scenario.as_ref(), &mut snapshots)?;
    }
    let summary = summarize(&config, &rec)?;
    Ok(RunResult {
        records: rec.records,
        summary,
        snapshots,
    })
}

fn summarize(config: &RunConfig, rec: &Recorder<'_>) -> Result<RunSummary, RunnerError> {
    let mut metrics: BTreeMap<String, MetricSummary> = BTreeMap::new();
    for r in &rec.records {
        let v = round_sig(r.value);
        metrics
            .entry(r.metric.clone())
            .and_modify(|m| {
                m.last = v;
                m.min = m.min.min(v);
                m.max = m.max.max(v);
                m.count += 1;
            })
            .or_insert(MetricSummary {
                first: v,
                last: v,
                min: v,
                max: v,
                count: 1,
            });
    }
    let mut assertion1 = BTreeMap::new();
    for (c, series) in &rec.history {
        let report = assertion1_report(series)?;
        let violated = report.pairs.iter().filter(|p| p.outcome == PairOutcome::Violated).count();
        assertion1.insert(
            c.clone(),
            Assertion1Verdict {
                pass: report.pass,
                checked: report.checked,
                skipped: report.skipped,
                violated,
            },
        );
    }
    let seed = rec.seed;
    Ok(RunSummary {
        run_id: rec.run_id.clone(),
        scenario: config.scenario.name().to_string(),
        seed,
        steps: config.steps,
        bins: config.bins,
        metrics,
        assertion1,
    })
}

impl RunResult {
    /// Writes `metrics.csv`, `summary.json` and, if recorded, `snapshots.jsonl`.
    pub fn write(&self, dir: &Path) -> Result<(), RunnerError> {
        fs::create_dir_all(dir).map_err(RunnerError::io(dir))?;
        let csv_path = dir.join("metrics.csv");
        let file = File::create(&csv_path).map_err(RunnerError::io(&csv_path))?;
        write_records(BufWriter::new(file), &self.records)?;
        let summary_path = dir.join("summary.json");
        let mut text = serde_json::to_string_pretty(&self.summary)?;
        text.push('\n');
        fs::write(&summary_path, text).map_err(RunnerError::io(&summary_path))?;
        if let Some(lines) = &self.snapshots {
            let path = dir.join("snapshots.jsonl");
            let mut w = BufWriter::new(File::create(&path).map_err(RunnerError::io(&path))?);
            for line in lines {
                writeln!(w, "{line}").map_err(RunnerError::io(&path))?;
            }
            w.flush().map_err(RunnerError::io(&path))?;
        }
        Ok(())
    }
}

/// Runs and writes into `out`, or the configured directory.
pub fn run_to_dir(config: &RunConfig, seed: Option<u64>, out: Option<&Path>) -> Result<RunResult, RunnerError> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .ok_or_else(|| RunnerError::Config("no output directory (config `out` or --out)".into()))?;
    let result = execute(config, seed)?;
    result.write(&dir)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::ScenarioKind;

    fn small_pd() -> RunConfig {
        let mut c = RunConfig::new(ScenarioKind::Pd, 4, 5);
        c.pd.grid = 12;
        c.pd.population = 60;
        c
    }

    #[test]
    fn one_record_per_step_and_metric() {
        let r = execute(&small_pd(), None).unwrap();
        // Steps 0..=5; si_local, swarm_potential (one contradiction each), si_global, joint_entropy, cooperation_fraction.
        assert_eq!(r.records.len(), 6 * 5);
        let mut keys: Vec<(u64, &str)> = r.records.iter().map(|x| (x.step, x.metric.as_str())).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), r.records.len());
        let coop = &r.summary.metrics["cooperation_fraction"];
        assert_eq!(coop.count, 6);
        assert!(coop.min <= coop.first && coop.first <= coop.max);
    }

    #[test]
    fn seed_override_and_run_id() {
        let r = execute(&small_pd(), Some(11)).unwrap();
        assert_eq!(r.summary.seed, 11);
        assert_eq!(r.records[0].run_id, "pd-s11");
    }

    #[test]
    fn single_contradiction_orders_agree() {
        let r = execute(&small_pd(), None).unwrap();
        for step in 0..=5 {
            let get = |m: &str| r.records.iter().find(|x| x.step == step && x.metric == m).unwrap().value;
            assert!((get("si_local.intention") - get("si_global")).abs() < 1e-12);
        }
    }

    #[test]
    fn undefined_scalars_are_skipped() {
        let mut c = RunConfig::new(ScenarioKind::Ants, 1, 3);
        c.metrics = Some(vec!["mean_route_efficiency".into()]);
        let r = execute(&c, None).unwrap();
        // Nobody carries food during the first steps.
        assert!(r.records.is_empty());
        assert!(r.summary.metrics.is_empty());
    }

    #[test]
    fn snapshots_when_asked() {
        let mut c = small_pd();
        c.snapshots = true;
        let r = execute(&c, None).unwrap();
        let lines = r.snapshots.unwrap();
        assert_eq!(lines.len(), 6);
        let v: serde_json::Value = serde_json::from_str(&lines[5]).unwrap();
        assert_eq!(v["step"], 5);
    }
}
