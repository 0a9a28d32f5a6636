//! Swarm-level measurements over sharpness values.
//!
//! Sharpness is continuous, so every distribution here is built by
//! quantizing [-1, 1] into `B` equal-width bins; a bin's midpoint stands in
//! for the values that fell into it. Logarithms are natural.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_BINS: usize = 21;
/// Entropy floor used when dividing by entropy.
pub const ENTROPY_FLOOR: f64 = 1e-9;
/// Floor on |swarm potential| when dividing by it.
pub const POTENTIAL_FLOOR: f64 = 1e-9;
/// Expectations closer than this count as unchanged between snapshots.
pub const EXPECTATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("no sharpness values to bin")]
    Empty,
    #[error("bin count must be at least 2 (got {0})")]
    TooFewBins(usize),
    #[error("sharpness {0} is outside (-1, 1)")]
    OutOfRange(f64),
    #[error("order metrics need at least 2 agents (got {0})")]
    TooFewAgents(usize),
    #[error("at least one contradiction is required")]
    NoContradictions,
    #[error("agent {agent} has no sample for contradiction `{contradiction}`")]
    MissingSample { agent: usize, contradiction: String },
    #[error("agent {agent} has more than one sample for contradiction `{contradiction}`")]
    DuplicateSample { agent: usize, contradiction: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSample {
    pub agent: usize,
    pub contradiction: String,
    pub lambda: f64,
}

/// All sharpness samples of one step.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SwarmSnapshot {
    pub step: u64,
    pub samples: Vec<SharpnessSample>,
}

impl SwarmSnapshot {
    pub fn new(step: u64) -> Self {
        Self {
            step,
            samples: Vec::new(),
        }
    }

    pub fn push(&mut self, agent: usize, contradiction: impl Into<String>, lambda: f64) {
        self.samples.push(SharpnessSample {
            agent,
            contradiction: contradiction.into(),
            lambda,
        });
    }

    /// Values of one contradiction, in agent order.
    pub fn values(&self, contradiction: &str) -> Vec<f64> {
        let mut v: Vec<(usize, f64)> = self
            .samples
            .iter()
            .filter(|s| s.contradiction == contradiction)
            .map(|s| (s.agent, s.lambda))
            .collect();
        v.sort_by_key(|x| x.0);
        v.into_iter().map(|x| x.1).collect()
    }

    pub fn agents(&self) -> BTreeSet<usize> {
        self.samples.iter().map(|s| s.agent).collect()
    }

    /// One sharpness vector per agent, ordered as `contradictions`.
    pub fn vectors(&self, contradictions: &[&str]) -> Result<Vec<Vec<f64>>, MetricsError> {
        let mut table: BTreeMap<usize, Vec<Option<f64>>> = BTreeMap::new();
        for s in &self.samples {
            let Some(col) = contradictions.iter().position(|c| *c == s.contradiction) else {
                continue;
            };
            let row = table
                .entry(s.agent)
                .or_insert_with(|| vec![None; contradictions.len()]);
            if row[col].replace(s.lambda).is_some() {
                return Err(MetricsError::DuplicateSample {
                    agent: s.agent,
                    contradiction: s.contradiction.clone(),
                });
            }
        }
        for agent in self.agents() {
            table
                .entry(agent)
                .or_insert_with(|| vec![None; contradictions.len()]);
        }
        table
            .into_iter()
            .map(|(agent, row)| {
                row.into_iter()
                    .zip(contradictions)
                    .map(|(v, c)| {
                        v.ok_or_else(|| MetricsError::MissingSample {
                            agent,
                            contradiction: c.to_string(),
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// An occupied bin: its index and how many samples fell into it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub index: usize,
    pub count: usize,
}

/// Empirical distribution of sharpness over `bin_count` uniform bins of [-1, 1].
/// Only occupied bins are stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedDistribution {
    bin_count: usize,
    sample_count: usize,
    bins: Vec<Bin>,
}

/// Index of the bin holding `lambda`; values on an interior edge go up.
pub fn bin_index(lambda: f64, bin_count: usize) -> usize {
    let idx = ((lambda + 1.0) * bin_count as f64 / 2.0).floor();
    (idx.max(0.0) as usize).min(bin_count - 1)
}

pub fn bin_midpoint(index: usize, bin_count: usize) -> f64 {
    -1.0 + (index as f64 + 0.5) * 2.0 / bin_count as f64
}

fn check_bins(bin_count: usize) -> Result<(), MetricsError> {
    if bin_count < 2 {
        Err(MetricsError::TooFewBins(bin_count))
    } else {
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<(), MetricsError> {
    if lambda.is_finite() && lambda.abs() < 1.0 {
        Ok(())
    } else {
        Err(MetricsError::OutOfRange(lambda))
    }
}

/// Entropy of an empirical distribution given its counts:
/// `ln M - (1/M) sum c ln c`, which is exact for the one-bin and
/// all-singletons cases.
fn entropy_from_counts<I: IntoIterator<Item = usize>>(counts: I, total: usize) -> f64 {
    let mut occupied = 0usize;
    let mut acc = 0.0;
    for c in counts {
        occupied += 1;
        if c > 1 {
            acc += c as f64 * (c as f64).ln();
        }
    }
    if occupied <= 1 {
        return 0.0;
    }
    let m = total as f64;
    (m.ln() - acc / m).max(0.0)
}

pub fn bin_sharpness(values: &[f64], bin_count: usize) -> Result<BinnedDistribution, MetricsError> {
    check_bins(bin_count)?;
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut counts = BTreeMap::new();
    for &v in values {
        check_lambda(v)?;
        *counts.entry(bin_index(v, bin_count)).or_insert(0usize) += 1;
    }
    Ok(BinnedDistribution {
        bin_count,
        sample_count: values.len(),
        bins: counts
            .into_iter()
            .map(|(index, count)| Bin { index, count })
            .collect(),
    })
}

impl BinnedDistribution {
    pub fn bin_count(&self) -> usize {
        self.bin_count
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    /// `(midpoint, probability)` per occupied bin.
    pub fn probabilities(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let m = self.sample_count as f64;
        self.bins
            .iter()
            .map(move |b| (bin_midpoint(b.index, self.bin_count), b.count as f64 / m))
    }

    pub fn expectation(&self) -> f64 {
        expectation(self)
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }
}

/// Mean sharpness, using bin midpoints.
pub fn expectation(dist: &BinnedDistribution) -> f64 {
    dist.probabilities().map(|(x, p)| x * p).sum()
}

/// Shannon entropy `-sum p ln p` of the binned distribution.
pub fn entropy(dist: &BinnedDistribution) -> f64 {
    entropy_from_counts(dist.bins.iter().map(|b| b.count), dist.sample_count)
}

/// Expectation over (floored) entropy, clamped to [-1, 1].
pub fn swarm_potential(dist: &BinnedDistribution) -> f64 {
    let e = expectation(dist);
    if e == 0.0 {
        return 0.0;
    }
    (e / entropy(dist).max(ENTROPY_FLOOR)).clamp(-1.0, 1.0)
}

/// Contrast between one agent's sharpness and the swarm mean, scaled by the
/// magnitude of the swarm potential's reciprocal and clamped to [0, 1].
pub fn relative_potential(agent_lambda: f64, dist: &BinnedDistribution) -> f64 {
    let e = expectation(dist);
    let denom = e.abs() + agent_lambda.abs();
    if denom == 0.0 {
        return 0.0;
    }
    let contrast = (e - agent_lambda).abs() / denom;
    if contrast == 0.0 {
        return 0.0;
    }
    let potential = swarm_potential(dist).abs().max(POTENTIAL_FLOOR);
    (contrast / potential).clamp(0.0, 1.0)
}

fn order_score(entropy: f64, agents: usize, dims: usize) -> Result<f64, MetricsError> {
    if agents < 2 {
        return Err(MetricsError::TooFewAgents(agents));
    }
    if dims == 0 {
        return Err(MetricsError::NoContradictions);
    }
    let cap = dims as f64 * (agents as f64).ln();
    Ok((1.0 - entropy / cap).clamp(0.0, 1.0))
}

/// Order of one contradiction: `(ln M - H) / ln M`.
pub fn si_local(dist: &BinnedDistribution) -> Result<f64, MetricsError> {
    order_score(entropy(dist), dist.sample_count, 1)
}

fn joint_counts(
    snapshot: &SwarmSnapshot,
    contradictions: &[&str],
    bin_count: usize,
) -> Result<(BTreeMap<Vec<usize>, usize>, usize), MetricsError> {
    check_bins(bin_count)?;
    if contradictions.is_empty() {
        return Err(MetricsError::NoContradictions);
    }
    let vectors = snapshot.vectors(contradictions)?;
    if vectors.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut counts = BTreeMap::new();
    for v in &vectors {
        let mut key = Vec::with_capacity(v.len());
        for &x in v {
            check_lambda(x)?;
            key.push(bin_index(x, bin_count));
        }
        *counts.entry(key).or_insert(0usize) += 1;
    }
    Ok((counts, vectors.len()))
}

/// Entropy of the joint distribution of per-agent binned sharpness vectors.
pub fn joint_entropy(
    snapshot: &SwarmSnapshot,
    contradictions: &[&str],
    bin_count: usize,
) -> Result<f64, MetricsError> {
    let (counts, total) = joint_counts(snapshot, contradictions, bin_count)?;
    Ok(entropy_from_counts(counts.into_values(), total))
}

/// Order of a set of contradictions: `(N ln M - H_joint) / (N ln M)`.
pub fn si_global(
    snapshot: &SwarmSnapshot,
    contradictions: &[&str],
    bin_count: usize,
) -> Result<f64, MetricsError> {
    let (counts, total) = joint_counts(snapshot, contradictions, bin_count)?;
    let h = entropy_from_counts(counts.into_values(), total);
    order_score(h, total, contradictions.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairOutcome {
    /// |P| and SI moved in the same direction.
    CoMonotone,
    /// Neither moved.
    Unchanged,
    /// They moved in opposite directions, or only one moved.
    Violated,
    /// Expectation changed, so the pair does not qualify.
    SkippedExpectationDrift,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub from: usize,
    pub to: usize,
    pub delta_potential: f64,
    pub delta_si: f64,
    pub outcome: PairOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoMonotonicityReport {
    pub pairs: Vec<PairCheck>,
    pub checked: usize,
    pub skipped: usize,
    pub pass: bool,
}

/// Checks, over consecutive distributions with unchanged expectation, that
/// |swarm potential| and local order move together.
pub fn assertion1_report(series: &[BinnedDistribution]) -> Result<CoMonotonicityReport, MetricsError> {
    if series.len() < 2 {
        return Err(MetricsError::TooFewAgents(series.len()));
    }
    let mut pairs = Vec::with_capacity(series.len() - 1);
    for (i, w) in series.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let drift = (expectation(a) - expectation(b)).abs();
        let dp = swarm_potential(b).abs() - swarm_potential(a).abs();
        let dsi = si_local(b)? - si_local(a)?;
        let outcome = if drift > EXPECTATION_TOLERANCE {
            PairOutcome::SkippedExpectationDrift
        } else if dp == 0.0 && dsi == 0.0 {
            PairOutcome::Unchanged
        } else if dsi != 0.0 && dp / dsi > 0.0 {
            PairOutcome::CoMonotone
        } else {
            PairOutcome::Violated
        };
        pairs.push(PairCheck {
            from: i,
            to: i + 1,
            delta_potential: dp,
            delta_si: dsi,
            outcome,
        });
    }
    let skipped = pairs
        .iter()
        .filter(|p| p.outcome == PairOutcome::SkippedExpectationDrift)
        .count();
    let pass = pairs.iter().all(|p| p.outcome != PairOutcome::Violated);
    Ok(CoMonotonicityReport {
        checked: pairs.len() - skipped,
        skipped,
        pairs,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_entropy(dist: &BinnedDistribution) -> f64 {
        let m = dist.sample_count() as f64;
        -dist
            .bins()
            .iter()
            .map(|b| {
                let p = b.count as f64 / m;
                p * p.ln()
            })
            .sum::<f64>()
    }

    #[test]
    fn binning_examples() {
        let d = bin_sharpness(&[0.5, 0.5, 0.5], 21).unwrap();
        assert_eq!(d.bins().len(), 1);
        assert_eq!(d.probabilities().next().unwrap().1, 1.0);

        let d = bin_sharpness(&[-0.9, 0.0, 0.9], 3).unwrap();
        let idx: Vec<usize> = d.bins().iter().map(|b| b.index).collect();
        assert_eq!(idx, vec![0, 1, 2]);
        assert!(d.probabilities().all(|(_, p)| (p - 1.0 / 3.0).abs() < 1e-15));

        let d = bin_sharpness(&[0.0], 2).unwrap();
        assert_eq!(d.bins()[0].index, 1);
    }

    #[test]
    fn binning_errors() {
        assert_eq!(bin_sharpness(&[], 21), Err(MetricsError::Empty));
        assert_eq!(bin_sharpness(&[0.1], 1), Err(MetricsError::TooFewBins(1)));
        assert_eq!(bin_sharpness(&[1.0], 4), Err(MetricsError::OutOfRange(1.0)));
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(expectation(&bin_sharpness(&[0.5], 2).unwrap()), 0.5);
        assert_eq!(expectation(&bin_sharpness(&[0.6, -0.4], 2).unwrap()), 0.0);
        let d = bin_sharpness(&[0.5, 0.5, 0.5, -0.5], 2).unwrap();
        assert!((expectation(&d) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&bin_sharpness(&[0.3; 5], 21).unwrap()), 0.0);
        let d = bin_sharpness(&[-0.75, -0.25, 0.25, 0.75], 4).unwrap();
        assert!((entropy(&d) - 4f64.ln()).abs() < 1e-15);
        // -(0.5 ln 0.5 + 2 * 0.25 ln 0.25) = 1.5 ln 2
        let d = bin_sharpness(&[-0.75, -0.75, 0.25, 0.75], 4).unwrap();
        assert!((entropy(&d) - 1.039_720_770_839_917_9).abs() < 1e-12);
    }

    #[test]
    fn potential_examples() {
        let d = bin_sharpness(&[0.6, -0.4], 2).unwrap();
        assert_eq!(swarm_potential(&d), 0.0);
        let d = bin_sharpness(&[0.5; 7], 2).unwrap();
        assert_eq!(swarm_potential(&d), 1.0);
        // E = 0.5, H = ln 2: 0.5 / 0.693147... = 0.721347...
        let d = bin_sharpness(&[0.25, 0.75], 4).unwrap();
        assert!((swarm_potential(&d) - 0.721_347_520_444_481_7).abs() < 1e-12);
    }

    #[test]
    fn relative_potential_examples() {
        let d = bin_sharpness(&[0.25, 0.75], 4).unwrap();
        assert_eq!(relative_potential(0.5, &d), 0.0);
        // opposite sign: contrast 1, scaled by 1/|P| and clamped.
        assert_eq!(relative_potential(-0.5, &d), 1.0);
        let d0 = bin_sharpness(&[0.6, -0.4], 2).unwrap();
        assert_eq!(relative_potential(0.0, &d0), 0.0);
        // Concentrated swarm: |P| = 1 so rP equals the contrast.
        let d1 = bin_sharpness(&[0.5; 4], 2).unwrap();
        let rp = relative_potential(0.25, &d1);
        assert!((rp - 0.25 / 0.75).abs() < 1e-15);
    }

    #[test]
    fn si_local_examples() {
        assert_eq!(si_local(&bin_sharpness(&[0.1; 10], 21).unwrap()).unwrap(), 1.0);
        let distinct: Vec<f64> = (0..10).map(|k| -0.95 + 0.2 * k as f64).collect();
        assert_eq!(si_local(&bin_sharpness(&distinct, 10).unwrap()).unwrap(), 0.0);
        // M = 100 spread evenly over 10 bins: H = ln 10 = ln(100) / 2.
        let values: Vec<f64> = (0..100).map(|k| -0.95 + 0.2 * (k % 10) as f64).collect();
        let si = si_local(&bin_sharpness(&values, 10).unwrap()).unwrap();
        assert!((si - 0.5).abs() < 1e-12);
        assert_eq!(
            si_local(&bin_sharpness(&[0.1], 21).unwrap()),
            Err(MetricsError::TooFewAgents(1))
        );
    }

    fn snapshot(rows: &[(f64, f64)]) -> SwarmSnapshot {
        let mut s = SwarmSnapshot::new(0);
        for (i, (a, b)) in rows.iter().enumerate() {
            s.push(i, "c1", *a);
            s.push(i, "c2", *b);
        }
        s
    }

    #[test]
    fn joint_entropy_examples() {
        let s = snapshot(&[(0.2, -0.3); 6]);
        assert_eq!(joint_entropy(&s, &["c1", "c2"], 21).unwrap(), 0.0);
        assert_eq!(si_global(&s, &["c1", "c2"], 21).unwrap(), 1.0);

        let rows: Vec<(f64, f64)> = (0..8).map(|k| (-0.9 + 0.2 * k as f64, 0.0)).collect();
        let s = snapshot(&rows);
        assert!((joint_entropy(&s, &["c1", "c2"], 10).unwrap() - 8f64.ln()).abs() < 1e-15);
        assert!((si_global(&s, &["c1", "c2"], 10).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn independent_product_sample_is_additive() {
        // Full product of 3 levels x 4 levels, each combination twice.
        let a = [-0.8, 0.0, 0.8];
        let b = [-0.75, -0.25, 0.25, 0.75];
        let mut rows = vec![];
        for &x in &a {
            for &y in &b {
                rows.push((x, y));
                rows.push((x, y));
            }
        }
        let s = snapshot(&rows);
        let h1 = entropy(&bin_sharpness(&s.values("c1"), 4).unwrap());
        let h2 = entropy(&bin_sharpness(&s.values("c2"), 4).unwrap());
        let hj = joint_entropy(&s, &["c1", "c2"], 4).unwrap();
        assert!((h1 - 3f64.ln()).abs() < 1e-12);
        assert!((h2 - 4f64.ln()).abs() < 1e-12);
        assert!((hj - (h1 + h2)).abs() < 1e-12);
    }

    #[test]
    fn single_dimension_global_equals_local() {
        let s = snapshot(&[(0.1, 0.0), (0.5, 0.0), (0.5, 0.0), (-0.7, 0.0)]);
        let g = si_global(&s, &["c1"], 21).unwrap();
        let l = si_local(&bin_sharpness(&s.values("c1"), 21).unwrap()).unwrap();
        assert_eq!(g, l);
    }

    #[test]
    fn missing_sample_is_reported() {
        let mut s = snapshot(&[(0.1, 0.1), (0.2, 0.2)]);
        s.samples.pop();
        assert!(matches!(
            joint_entropy(&s, &["c1", "c2"], 21),
            Err(MetricsError::MissingSample { agent: 1, .. })
        ));
    }

    #[test]
    fn assertion1_examples() {
        // Same E = 0.5; entropy ln 4 -> ln 2 (bin width 0.1).
        let a = bin_sharpness(&[0.35, 0.45, 0.55, 0.65], 20).unwrap();
        let b = bin_sharpness(&[0.45, 0.45, 0.55, 0.55], 20).unwrap();
        assert!((expectation(&a) - 0.5).abs() < 1e-12);
        assert!((expectation(&b) - 0.5).abs() < 1e-12);
        assert!((entropy(&a) - 4f64.ln()).abs() < 1e-12);
        assert!((entropy(&b) - 2f64.ln()).abs() < 1e-12);
        let r = assertion1_report(&[a.clone(), b.clone()]).unwrap();
        assert!(r.pass);
        assert_eq!(r.pairs[0].outcome, PairOutcome::CoMonotone);

        let r = assertion1_report(&[a.clone(), a.clone()]).unwrap();
        assert!(r.pass);
        assert_eq!(r.pairs[0].outcome, PairOutcome::Unchanged);

        let c = bin_sharpness(&[0.25; 4], 20).unwrap();
        let r = assertion1_report(&[b, c]).unwrap();
        assert_eq!(r.pairs[0].outcome, PairOutcome::SkippedExpectationDrift);
        assert_eq!(r.skipped, 1);
        assert!(r.pass);
    }

    #[test]
    fn entropy_matches_brute_force_on_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let m = rng.gen_range(1..200);
            let b = rng.gen_range(2..40);
            let values: Vec<f64> = (0..m).map(|_| rng.gen_range(-0.999..0.999)).collect();
            let d = bin_sharpness(&values, b).unwrap();
            assert!((entropy(&d) - brute_entropy(&d)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn order_scores_bounded(values in prop::collection::vec(-0.999f64..0.999, 2..120), b in 2usize..40) {
            let d = bin_sharpness(&values, b).unwrap();
            let si = si_local(&d).unwrap();
            prop_assert!((0.0..=1.0).contains(&si));
            prop_assert_eq!(si == 1.0, d.bins().len() == 1);
            let h = entropy(&d);
            let cap = (values.len().min(b) as f64).ln();
            prop_assert!(h >= 0.0 && h <= cap + 1e-12);
            let total: f64 = d.probabilities().map(|x| x.1).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(d.bins().len() <= values.len().min(b));
        }

        #[test]
        fn metrics_are_exchangeable(rows in prop::collection::vec((-0.999f64..0.999, -0.999f64..0.999), 2..60), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            let s = snapshot(&rows);
            let mut shuffled = rows.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let t = snapshot(&shuffled);
            prop_assert_eq!(joint_entropy(&s, &["c1", "c2"], 21).unwrap(), joint_entropy(&t, &["c1", "c2"], 21).unwrap());
            let ds = bin_sharpness(&s.values("c1"), 21).unwrap();
            let dt = bin_sharpness(&t.values("c1"), 21).unwrap();
            prop_assert_eq!(entropy(&ds), entropy(&dt));
            prop_assert_eq!(si_local(&ds).unwrap(), si_local(&dt).unwrap());
            prop_assert!((swarm_potential(&ds) - swarm_potential(&dt)).abs() < 1e-12);
        }

        #[test]
        fn joint_entropy_is_subadditive(rows in prop::collection::vec((-0.999f64..0.999, -0.999f64..0.999), 1..80), b in 2usize..25) {
            let s = snapshot(&rows);
            let hj = joint_entropy(&s, &["c1", "c2"], b).unwrap();
            let h1 = entropy(&bin_sharpness(&s.values("c1"), b).unwrap());
            let h2 = entropy(&bin_sharpness(&s.values("c2"), b).unwrap());
            prop_assert!(hj <= h1 + h2 + 1e-12);
            if rows.len() >= 2 {
                let g = si_global(&s, &["c1", "c2"], b).unwrap();
                prop_assert!((0.0..=1.0).contains(&g));
            }
        }
    }
}
