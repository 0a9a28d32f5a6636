//! Behavior space and constrained behavior selection.
//!
//! Selection ranks candidates lexicographically:
//!
//! 1. hard filter: every contradiction's action pair is an equilibrium of
//!    that contradiction's internal game (a mixed equilibrium is realized
//!    once per call by seeded draws);
//! 2. hard filter (in a swarm): every resource claim fits its maximum;
//! 3. utility;
//! 4. claimed fraction of the contested resources;
//! 5. alignment of predicted relative potential with each interaction's
//!    conform/deviate target;
//! 6. seeded uniform choice among whatever is still tied.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contradiction::{ContradictionState, ForceDelta, Individual, ModelError};
use crate::game::{Game2x2, StrategyChoice};
use crate::metrics::{bin_sharpness, relative_potential, DEFAULT_BINS};

/// Largest contradiction count whose full behavior space is enumerated.
pub const MAX_ENUMERATED: usize = 8;
/// Scores closer than this are treated as tied.
pub const SCORE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BehaviorError {
    #[error("{0} contradictions exceed the enumeration cap of {MAX_ENUMERATED}; select per contradiction instead")]
    TooManyContradictions(usize),
    #[error("expected one game per contradiction ({expected}), got {got}")]
    GameCount { expected: usize, got: usize },
    #[error("potential threshold must lie strictly inside (0, 1), got {0}")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The pair of actions taken on one contradiction: what the positive side
/// does and what the negative side does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionPair {
    pub pos: StrategyChoice,
    pub neg: StrategyChoice,
}

impl ActionPair {
    /// `<++>, <+->, <-+>, <-->`: strengthen/weaken the positive side, then the negative.
    pub const ALL: [ActionPair; 4] = [
        ActionPair::new(StrategyChoice::Compete, StrategyChoice::Compete),
        ActionPair::new(StrategyChoice::Compete, StrategyChoice::Cooperate),
        ActionPair::new(StrategyChoice::Cooperate, StrategyChoice::Compete),
        ActionPair::new(StrategyChoice::Cooperate, StrategyChoice::Cooperate),
    ];

    pub const fn new(pos: StrategyChoice, neg: StrategyChoice) -> Self {
        Self { pos, neg }
    }

    /// Force change when each side competes (+) or cooperates (-) by `magnitude`.
    pub fn force_delta(self, pos_magnitude: f64, neg_magnitude: f64) -> ForceDelta {
        let sign = |c: StrategyChoice| match c {
            StrategyChoice::Compete => 1.0,
            StrategyChoice::Cooperate => -1.0,
        };
        ForceDelta {
            pos: sign(self.pos) * pos_magnitude,
            neg: sign(self.neg) * neg_magnitude,
        }
    }
}

/// One action pair per contradiction, in the individual's contradiction order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Behavior(pub Vec<ActionPair>);

impl Behavior {
    pub fn pairs(&self) -> &[ActionPair] {
        &self.0
    }

    pub fn pair(&self, index: usize) -> ActionPair {
        self.0[index]
    }
}

/// All `4^n` behaviors; the first contradiction varies slowest.
pub fn behavior_space(n: usize) -> Result<Vec<Behavior>, BehaviorError> {
    if n > MAX_ENUMERATED {
        return Err(BehaviorError::TooManyContradictions(n));
    }
    let mut out = vec![Behavior(Vec::with_capacity(n))];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|b| {
                ActionPair::ALL.iter().map(move |p| {
                    let mut next = b.0.clone();
                    next.push(*p);
                    Behavior(next)
                })
            })
            .collect();
    }
    Ok(out)
}

pub fn enumerate_behaviors<P>(individual: &Individual<P>) -> Result<Vec<Behavior>, BehaviorError> {
    behavior_space(individual.contradictions().len())
}

/// A quantity claimed from a resource with a finite maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceClaim {
    pub resource: String,
    pub quantity: f64,
    pub max_available: f64,
}

impl ResourceClaim {
    pub fn new(resource: impl Into<String>, quantity: f64, max_available: f64) -> Self {
        Self {
            resource: resource.into(),
            quantity,
            max_available,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.quantity >= 0.0 && self.quantity <= self.max_available
    }

    pub fn fraction(&self) -> f64 {
        if self.max_available > 0.0 && self.max_available.is_finite() {
            self.quantity / self.max_available
        } else {
            0.0
        }
    }
}

/// One interaction seen from its center agent: the focal contradiction, who
/// takes part, which resources they contest, how intense the contest is, and
/// the participants' current sharpness on the focal contradiction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionContext {
    pub center: usize,
    pub focal: String,
    pub participants: Vec<usize>,
    pub contested: Vec<String>,
    /// Competition intensity on the contested resources, in [0, 1].
    pub pressure: f64,
    pub sharpness: Vec<f64>,
}

impl InteractionContext {
    fn weight(&self) -> f64 {
        self.contested.len().max(1) as f64
    }
}

/// How interactions bend selection: below `threshold` pressure agents
/// conform to their neighbors, at or above it they deviate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PotentialPolicy {
    pub threshold: f64,
    pub conform_target: f64,
    pub deviate_target: f64,
    pub bins: usize,
}

impl Default for PotentialPolicy {
    fn default() -> Self {
        Self {
            threshold: 0.8,
            conform_target: 0.0,
            deviate_target: 1.0,
            bins: DEFAULT_BINS,
        }
    }
}

impl PotentialPolicy {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        if self.threshold > 0.0 && self.threshold < 1.0 {
            Ok(())
        } else {
            Err(BehaviorError::InvalidThreshold(self.threshold))
        }
    }

    pub fn target(&self, pressure: f64) -> f64 {
        if pressure < self.threshold {
            self.conform_target
        } else {
            self.deviate_target
        }
    }
}

/// Scenario knowledge the selector needs about candidate behaviors.
pub trait BehaviorOutlook<P> {
    /// Properties the individual would have after performing `behavior`.
    fn predict(&self, individual: &Individual<P>, behavior: &Behavior) -> P;

    /// Resources `behavior` would claim.
    fn claims(&self, _individual: &Individual<P>, _behavior: &Behavior) -> Vec<ResourceClaim> {
        Vec::new()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Diagnostic {
    /// A contradiction's game had no usable mixed equilibrium; (0.5, 0.5) was used.
    MixedFallback { contradiction: String },
    /// Every equilibrium behavior over-claimed; the least hungry one was returned.
    AllInfeasible,
    /// No interaction carried neighbor sharpness, so the potential key was skipped.
    PotentialSkipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub behavior: Behavior,
    pub utility: f64,
    pub resource_fraction: f64,
    pub potential_score: Option<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

struct Candidate {
    behavior: Behavior,
    utility: f64,
    fraction: f64,
    feasible: bool,
    potential: f64,
}

/// Equilibrium action pairs of each game; mixed equilibria are realized by
/// one Bernoulli draw per side.
fn admissible_pairs<R: Rng + ?Sized>(
    contradictions: &[ContradictionState],
    games: &[Game2x2],
    rng: &mut R,
    diagnostics: &mut Vec<Diagnostic>,
) -> Vec<Vec<ActionPair>> {
    games
        .iter()
        .zip(contradictions)
        .map(|(g, c)| {
            let pure = g.pure_nash();
            if !pure.is_empty() {
                return pure.into_iter().map(|(p, n)| ActionPair::new(p, n)).collect();
            }
            let mix = g.mixed_nash();
            if mix.fallback {
                diagnostics.push(Diagnostic::MixedFallback {
                    contradiction: c.name().to_string(),
                });
            }
            let draw = |p: f64, rng: &mut R| {
                if rng.gen_bool(p.clamp(0.0, 1.0)) {
                    StrategyChoice::Compete
                } else {
                    StrategyChoice::Cooperate
                }
            };
            let pos = draw(mix.p_pos_compete, rng);
            let neg = draw(mix.p_neg_compete, rng);
            vec![ActionPair::new(pos, neg)]
        })
        .collect()
}

/// Behaviors built only from equilibrium pairs, in enumeration order.
pub fn admissible_behaviors<P, R: Rng + ?Sized>(
    individual: &Individual<P>,
    games: &[Game2x2],
    rng: &mut R,
) -> Result<(Vec<Behavior>, Vec<Diagnostic>), BehaviorError> {
    let n = individual.contradictions().len();
    if games.len() != n {
        return Err(BehaviorError::GameCount {
            expected: n,
            got: games.len(),
        });
    }
    if n > MAX_ENUMERATED {
        return Err(BehaviorError::TooManyContradictions(n));
    }
    let mut diagnostics = Vec::new();
    let per = admissible_pairs(individual.contradictions(), games, rng, &mut diagnostics);
    let mut out = vec![Behavior(Vec::with_capacity(n))];
    for pairs in &per {
        out = out
            .into_iter()
            .flat_map(|b| {
                pairs.iter().map(move |p| {
                    let mut next = b.0.clone();
                    next.push(*p);
                    Behavior(next)
                })
            })
            .collect();
    }
    out.sort_by_key(|b| {
        b.0.iter()
            .map(|p| ActionPair::ALL.iter().position(|q| q == p).unwrap_or(0))
            .collect::<Vec<_>>()
    });
    Ok((out, diagnostics))
}

/// Sharpness of every contradiction after one application of `behavior`
/// with the individual's default action magnitudes.
pub fn predicted_sharpness<P>(individual: &Individual<P>, behavior: &Behavior) -> Vec<f64> {
    individual
        .contradictions()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let quad = individual.actions_at(i);
            let pair = behavior.pair(i);
            let pos_mag = match pair.pos {
                StrategyChoice::Compete => quad.strengthen_pos.magnitude,
                StrategyChoice::Cooperate => quad.weaken_pos.magnitude,
            };
            let neg_mag = match pair.neg {
                StrategyChoice::Compete => quad.strengthen_neg.magnitude,
                StrategyChoice::Cooperate => quad.weaken_neg.magnitude,
            };
            let mut next = c.clone();
            next.apply_delta(pair.force_delta(pos_mag, neg_mag));
            next.sharpness()
        })
        .collect()
}

fn keep_best<F: Fn(&Candidate) -> f64>(pool: Vec<Candidate>, key: F) -> Vec<Candidate> {
    let best = pool.iter().map(&key).fold(f64::NEG_INFINITY, f64::max);
    pool.into_iter()
        .filter(|c| key(c) >= best - SCORE_TOLERANCE)
        .collect()
}

fn finish<R: Rng + ?Sized>(
    mut pool: Vec<Candidate>,
    rng: &mut R,
    potential_used: bool,
    diagnostics: Vec<Diagnostic>,
) -> Selection {
    let pick = if pool.len() == 1 {
        0
    } else {
        rng.gen_range(0..pool.len())
    };
    let c = pool.swap_remove(pick);
    Selection {
        behavior: c.behavior,
        utility: c.utility,
        resource_fraction: c.fraction,
        potential_score: potential_used.then_some(c.potential),
        diagnostics,
    }
}

fn score<P, O: BehaviorOutlook<P> + ?Sized>(
    individual: &Individual<P>,
    behavior: Behavior,
    outlook: &O,
    with_claims: bool,
) -> Result<Candidate, BehaviorError> {
    let props = outlook.predict(individual, &behavior);
    let utility = individual.utility_of(&props)?;
    let (fraction, feasible) = if with_claims {
        let claims = outlook.claims(individual, &behavior);
        (
            claims.iter().map(ResourceClaim::fraction).sum(),
            claims.iter().all(ResourceClaim::is_feasible),
        )
    } else {
        (0.0, true)
    };
    Ok(Candidate {
        behavior,
        utility,
        fraction,
        feasible,
        potential: 0.0,
    })
}

/// Best-utility equilibrium behavior of an individual acting alone.
pub fn select_isolated<P, O, R>(
    individual: &Individual<P>,
    games: &[Game2x2],
    outlook: &O,
    rng: &mut R,
) -> Result<Selection, BehaviorError>
where
    O: BehaviorOutlook<P> + ?Sized,
    R: Rng + ?Sized,
{
    let (behaviors, diagnostics) = admissible_behaviors(individual, games, rng)?;
    let pool = behaviors
        .into_iter()
        .map(|b| score(individual, b, outlook, false))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = keep_best(pool, |c| c.utility);
    Ok(finish(pool, rng, false, diagnostics))
}

fn swarm_pool<P, O, R>(
    individual: &Individual<P>,
    games: &[Game2x2],
    outlook: &O,
    rng: &mut R,
) -> Result<(Vec<Candidate>, Vec<Diagnostic>), BehaviorError>
where
    O: BehaviorOutlook<P> + ?Sized,
    R: Rng + ?Sized,
{
    let (behaviors, mut diagnostics) = admissible_behaviors(individual, games, rng)?;
    let all = behaviors
        .into_iter()
        .map(|b| score(individual, b, outlook, true))
        .collect::<Result<Vec<_>, _>>()?;
    if all.iter().any(|c| c.feasible) {
        let feasible = all.into_iter().filter(|c| c.feasible).collect();
        let pool = keep_best(feasible, |c| c.utility);
        Ok((keep_best(pool, |c| c.fraction), diagnostics))
    } else {
        diagnostics.push(Diagnostic::AllInfeasible);
        Ok((keep_best(all, |c| -c.fraction), diagnostics))
    }
}

/// Like [`select_isolated`], but only behaviors whose claims fit, preferring
/// the ones that claim the larger share of contested resources.
pub fn select_in_swarm<P, O, R>(
    individual: &Individual<P>,
    games: &[Game2x2],
    outlook: &O,
    rng: &mut R,
) -> Result<Selection, BehaviorError>
where
    O: BehaviorOutlook<P> + ?Sized,
    R: Rng + ?Sized,
{
    let (pool, diagnostics) = swarm_pool(individual, games, outlook, rng)?;
    Ok(finish(pool, rng, false, diagnostics))
}

/// Like [`select_in_swarm`], with a final key that pulls the predicted
/// relative potential of each interaction toward its target: 0 (conform)
/// under low pressure, 1 (deviate) under high pressure. Interactions are
/// combined by a weighted sum, weighted by how many resources they contest.
pub fn select_with_potential<P, O, R>(
    individual: &Individual<P>,
    games: &[Game2x2],
    outlook: &O,
    contexts: &[InteractionContext],
    policy: &PotentialPolicy,
    rng: &mut R,
) -> Result<Selection, BehaviorError>
where
    O: BehaviorOutlook<P> + ?Sized,
    R: Rng + ?Sized,
{
    policy.validate()?;
    let (mut pool, mut diagnostics) = swarm_pool(individual, games, outlook, rng)?;
    let mut active = Vec::new();
    for ctx in contexts.iter().filter(|c| !c.sharpness.is_empty()) {
        let idx = individual.index_of(&ctx.focal)?;
        let values: Vec<f64> = ctx.sharpness.iter().map(|v| v.clamp(-0.999_999_999, 0.999_999_999)).collect();
        let dist = bin_sharpness(&values, policy.bins).map_err(|e| {
            ModelError::Dynamics(format!("interaction sharpness for `{}`: {e}", ctx.focal))
        })?;
        active.push((idx, dist, policy.target(ctx.pressure), ctx.weight()));
    }
    if active.is_empty() {
        diagnostics.push(Diagnostic::PotentialSkipped);
        return Ok(finish(pool, rng, false, diagnostics));
    }
    if pool.len() > 1 {
        for c in pool.iter_mut() {
            let predicted = predicted_sharpness(individual, &c.behavior);
            c.potential = -active
                .iter()
                .map(|(idx, dist, target, w)| w * (relative_potential(predicted[*idx], dist) - target).abs())
                .sum::<f64>();
        }
        pool = keep_best(pool, |c| c.potential);
    }
    Ok(finish(pool, rng, true, diagnostics))
}
