//! Replicated runs over a grid of parameter values.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::record::{round_sig, write_records, MetricRecord};
use super::run::{execute, RunResult};
use super::RunnerError;

/// One swept parameter: a dotted path into the config and its values.
#[derive(Clone, Debug, PartialEq)]
pub struct Variation {
    pub path: String,
    pub values: Vec<toml::Value>,
}

fn parse_scalar(text: &str) -> toml::Value {
    match text {
        "on" | "true" => return toml::Value::Boolean(true),
        "off" | "false" => return toml::Value::Boolean(false),
        _ => {}
    }
    if let Ok(i) = text.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = text.parse::<f64>() {
        return toml::Value::Float(f);
    }
    toml::Value::String(text.to_string())
}

/// Parses `path=v1,v2,...`; `on`/`off` read as booleans.
pub fn parse_vary(spec: &str) -> Result<Variation, RunnerError> {
    let (path, list) = spec
        .split_once('=')
        .ok_or_else(|| RunnerError::Config(format!("--vary expects param=v1,v2,..., got `{spec}`")))?;
    let path = path.trim();
    let values: Vec<toml::Value> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_scalar)
        .collect();
    if path.is_empty() || values.is_empty() {
        return Err(RunnerError::Config(format!("--vary `{spec}` names no parameter or no values")));
    }
    Ok(Variation {
        path: path.to_string(),
        values,
    })
}

fn render(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Returns a copy of `base` with the dotted `path` set to `value`. The
/// parameter must exist in the fully populated config.
pub fn apply(base: &RunConfig, path: &str, value: &toml::Value) -> Result<RunConfig, RunnerError> {
    let mut tree = toml::Value::try_from(base).map_err(|e| RunnerError::Config(e.to_string()))?;
    let mut slot = &mut tree;
    for key in path.split('.') {
        slot = slot
            .get_mut(key)
            .ok_or_else(|| RunnerError::Config(format!("unknown parameter `{path}`")))?;
    }
    *slot = match (&*slot, value) {
        (toml::Value::Float(_), toml::Value::Integer(i)) => toml::Value::Float(*i as f64),
        _ => value.clone(),
    };
    tree.try_into()
        .map_err(|e: toml::de::Error| RunnerError::Config(format!("`{path} = {}`: {e}", render(value))))
}

/// A labelled point of the parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub label: String,
    pub config: RunConfig,
}

fn expand(base: &RunConfig, vary: &[Variation]) -> Result<Vec<GridPoint>, RunnerError> {
    let mut points = vec![GridPoint {
        label: String::new(),
        config: base.clone(),
    }];
    for v in vary {
        let mut next = Vec::with_capacity(points.len() * v.values.len());
        for p in &points {
            for value in &v.values {
                let part = format!("{}={}", v.path, render(value));
                next.push(GridPoint {
                    label: if p.label.is_empty() { part } else { format!("{};{part}", p.label) },
                    config: apply(&p.config, &v.path, value)?,
                });
            }
        }
        points = next;
    }
    Ok(points)
}

/// Final-step medians of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub label: String,
    pub runs: Vec<String>,
    pub final_medians: BTreeMap<String, f64>,
}

/// Replicates of a variant set against the same replicates of the baseline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub metric: String,
    pub baseline: String,
    pub variant: String,
    pub baseline_median: f64,
    pub variant_median: f64,
    pub median_difference: f64,
    pub variant_higher: usize,
    pub ties: usize,
    pub pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub base_seed: u64,
    pub replicates: u64,
    pub points: Vec<PointSummary>,
    pub comparisons: Vec<PairedComparison>,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub records: Vec<MetricRecord>,
    pub medians: Vec<MetricRecord>,
    pub summary: SweepSummary,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Final value of every metric in a run.
fn finals(run: &RunResult) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for r in &run.records {
        out.insert(r.metric.clone(), round_sig(r.value));
    }
    out
}

/// Runs `replicates` seeds (base seed + replicate index) at every grid point.
pub fn sweep(base: &RunConfig, vary: &[Variation], replicates: u64) -> Result<SweepResult, RunnerError> {
    if replicates == 0 {
        return Err(RunnerError::Config("replicates must be at least 1".into()));
    }
    let base_seed = base.validate()?;
    let points = expand(base, vary)?;
    let mut jobs = Vec::new();
    for p in &points {
        let mut config = p.config.clone();
        config.snapshots = false;
        config.validate()?;
        for r in 0..replicates {
            let mut c = config.clone();
            let seed = base_seed + r;
            let tag = if p.label.is_empty() { String::new() } else { format!("{}|", p.label) };
            c.run_id = Some(format!("{tag}r{r}"));
            c.seed = Some(seed);
            jobs.push(c);
        }
    }
    let runs: Vec<RunResult> = jobs
        .par_iter()
        .map(|c| execute(c, None))
        .collect::<Result<_, _>>()?;

    let mut records = Vec::new();
    let mut medians = Vec::new();
    let mut summaries = Vec::new();
    let mut per_point_finals = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let group = &runs[i * replicates as usize..(i + 1) * replicates as usize];
        let mut series: BTreeMap<(String, u64), Vec<f64>> = BTreeMap::new();
        for run in group {
            for r in &run.records {
                series.entry((r.metric.clone(), r.step)).or_default().push(round_sig(r.value));
            }
            records.extend(run.records.iter().cloned());
        }
        let label = if p.label.is_empty() { "all".to_string() } else { p.label.clone() };
        let mut point_medians = Vec::new();
        for ((metric, step), mut values) in series {
            point_medians.push(MetricRecord {
                run_id: format!("median|{label}"),
                seed: base_seed,
                step,
                metric,
                value: median(&mut values),
            });
        }
        point_medians.sort_by(|a, b| a.step.cmp(&b.step).then_with(|| a.metric.cmp(&b.metric)));
        medians.extend(point_medians);
        let finals: Vec<BTreeMap<String, f64>> = group.iter().map(finals).collect();
        let mut final_medians = BTreeMap::new();
        let metrics: std::collections::BTreeSet<&String> = finals.iter().flat_map(|f| f.keys()).collect();
        for m in metrics {
            let mut v: Vec<f64> = finals.iter().filter_map(|f| f.get(m).copied()).collect();
            final_medians.insert(m.clone(), round_sig(median(&mut v)));
        }
        summaries.push(PointSummary {
            label,
            runs: group.iter().map(|r| r.summary.run_id.clone()).collect(),
            final_medians,
        });
        per_point_finals.push(finals);
    }

    let comparisons = compare(&summaries, &per_point_finals);
    Ok(SweepResult {
        records,
        medians,
        summary: SweepSummary {
            base_seed,
            replicates,
            points: summaries,
            comparisons,
        },
    })
}

/// Pairs every point with the first one, replicate by replicate (same seed).
fn compare(points: &[PointSummary], finals: &[Vec<BTreeMap<String, f64>>]) -> Vec<PairedComparison> {
    let mut out = Vec::new();
    let Some((base, rest)) = points.split_first() else {
        return out;
    };
    for (k, variant) in rest.iter().enumerate() {
        for metric in base.final_medians.keys() {
            let pairs: Vec<(f64, f64)> = finals[0]
                .iter()
                .zip(&finals[k + 1])
                .filter_map(|(a, b)| Some((*a.get(metric)?, *b.get(metric)?)))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            let mut diffs: Vec<f64> = pairs.iter().map(|(a, b)| b - a).collect();
            let mut a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let mut b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            out.push(PairedComparison {
                metric: metric.clone(),
                baseline: base.label.clone(),
                variant: variant.label.clone(),
                baseline_median: round_sig(median(&mut a)),
                variant_median: round_sig(median(&mut b)),
                median_difference: round_sig(median(&mut diffs)),
                variant_higher: pairs.iter().filter(|(a, b)| b > a).count(),
                ties: pairs.iter().filter(|(a, b)| a == b).count(),
                pairs: pairs.len(),
            });
        }
    }
    out
}

/// Writes `records.csv`, `medians.csv` and `sweep_summary.json` into `dir`.
pub fn write_sweep(result: &SweepResult, dir: &Path) -> Result<(), RunnerError> {
    fs::create_dir_all(dir).map_err(RunnerError::io(dir))?;
    for (name, rows) in [("records.csv", &result.records), ("medians.csv", &result.medians)] {
        let path = dir.join(name);
        let file = File::create(&path).map_err(RunnerError::io(&path))?;
        write_records(BufWriter::new(file), rows)?;
    }
    let path = dir.join("sweep_summary.json");
    let mut text = serde_json::to_string_pretty(&result.summary)?;
    text.push('\n');
    fs::write(&path, text).map_err(RunnerError::io(&path))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::ScenarioKind;

    fn base() -> RunConfig {
        let mut c = RunConfig::new(ScenarioKind::Pd, 10, 4);
        c.pd.grid = 15;
        c.pd.population = 80;
        c
    }

    #[test]
    fn parses_lists() {
        let v = parse_vary("pd.mobile=on,off").unwrap();
        assert_eq!(v.values, vec![toml::Value::Boolean(true), toml::Value::Boolean(false)]);
        let v = parse_vary("pd.population = 100, 200").unwrap();
        assert_eq!(v.path, "pd.population");
        assert_eq!(v.values, vec![toml::Value::Integer(100), toml::Value::Integer(200)]);
        assert!(parse_vary("pd.population").is_err());
        assert!(parse_vary("=1").is_err());
    }

    #[test]
    fn apply_sets_nested_values() {
        let c = apply(&base(), "pd.population", &toml::Value::Integer(90)).unwrap();
        assert_eq!(c.pd.population, 90);
        let c = apply(&base(), "geese.speed_step", &toml::Value::Integer(1)).unwrap();
        assert_eq!(c.geese.speed_step, 1.0);
        assert!(apply(&base(), "pd.popul", &toml::Value::Integer(1)).unwrap_err().is_config());
        assert!(apply(&base(), "pd.mobile", &toml::Value::Integer(1)).unwrap_err().is_config());
    }

    #[test]
    fn counts_runs_and_series() {
        let vary = [parse_vary("pd.population=40,60,80").unwrap()];
        let r = sweep(&base(), &vary, 2).unwrap();
        assert_eq!(r.summary.points.len(), 3);
        let runs: std::collections::BTreeSet<&str> = r.records.iter().map(|x| x.run_id.as_str()).collect();
        assert_eq!(runs.len(), 6);
        let series: std::collections::BTreeSet<&str> = r.medians.iter().map(|x| x.run_id.as_str()).collect();
        assert_eq!(series.len(), 3);
        assert_eq!(r.summary.comparisons.iter().filter(|c| c.metric == "cooperation_fraction").count(), 2);
        let seeds: std::collections::BTreeSet<u64> = r.records.iter().map(|x| x.seed).collect();
        assert_eq!(seeds, [10, 11].into_iter().collect());
    }

    #[test]
    fn single_replicate_medians_are_the_run() {
        let vary = [parse_vary("pd.mobile=off").unwrap()];
        let r = sweep(&base(), &vary, 1).unwrap();
        assert_eq!(r.medians.len(), r.records.len());
        let mut records = r.records.clone();
        records.sort_by(|a, b| a.step.cmp(&b.step).then_with(|| a.metric.cmp(&b.metric)));
        for (m, x) in r.medians.iter().zip(&records) {
            assert_eq!((m.step, &m.metric, m.value), (x.step, &x.metric, round_sig(x.value)));
        }
    }

    #[test]
    fn zero_replicates_is_a_config_error() {
        assert!(sweep(&base(), &[], 0).unwrap_err().is_config());
    }
}
