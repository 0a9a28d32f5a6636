//! The 2x2 internal game of a contradiction.
//!
//! Rows are the positive side's strategy, columns the negative side's.
//! Competing strengthens one's own side, cooperating weakens it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("payoff at [{row}][{col}] is not finite")]
    NonFinitePayoff { row: usize, col: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyChoice {
    Compete,
    Cooperate,
}

impl StrategyChoice {
    pub const BOTH: [StrategyChoice; 2] = [StrategyChoice::Compete, StrategyChoice::Cooperate];

    pub fn index(self) -> usize {
        match self {
            StrategyChoice::Compete => 0,
            StrategyChoice::Cooperate => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            StrategyChoice::Compete => StrategyChoice::Cooperate,
            StrategyChoice::Cooperate => StrategyChoice::Compete,
        }
    }
}

/// Payoffs `(positive side, negative side)` indexed `[pos_choice][neg_choice]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Game2x2 {
    payoff: [[(f64, f64); 2]; 2],
}

impl Game2x2 {
    pub fn new(payoff: [[(f64, f64); 2]; 2]) -> Result<Self, GameError> {
        for (row, cells) in payoff.iter().enumerate() {
            for (col, (a, b)) in cells.iter().enumerate() {
                if !a.is_finite() || !b.is_finite() {
                    return Err(GameError::NonFinitePayoff { row, col });
                }
            }
        }
        Ok(Self { payoff })
    }

    /// Game where each side's payoff depends only on its own choice.
    pub fn separable(pos: [f64; 2], neg: [f64; 2]) -> Result<Self, GameError> {
        Self::new([
            [(pos[0], neg[0]), (pos[0], neg[1])],
            [(pos[1], neg[0]), (pos[1], neg[1])],
        ])
    }

    pub fn payoff(&self, pos: StrategyChoice, neg: StrategyChoice) -> (f64, f64) {
        self.payoff[pos.index()][neg.index()]
    }

    pub fn cells(&self) -> &[[(f64, f64); 2]; 2] {
        &self.payoff
    }

    /// Cells where neither side gains by deviating alone, in row-major order.
    pub fn pure_nash(&self) -> Vec<(StrategyChoice, StrategyChoice)> {
        let mut out = Vec::with_capacity(4);
        for p in StrategyChoice::BOTH {
            for n in StrategyChoice::BOTH {
                let (up, un) = self.payoff(p, n);
                let pos_ok = up >= self.payoff(p.other(), n).0;
                let neg_ok = un >= self.payoff(p, n.other()).1;
                if pos_ok && neg_ok {
                    out.push((p, n));
                }
            }
        }
        out
    }

    /// Indifference mix: `p_pos` is the positive side's probability of
    /// competing that leaves the negative side indifferent, and vice versa.
    /// Degenerate games fall back to (0.5, 0.5) with `fallback` set.
    pub fn mixed_nash(&self) -> MixedEquilibrium {
        let u = |r: usize, c: usize| self.payoff[r][c].0;
        let v = |r: usize, c: usize| self.payoff[r][c].1;
        // Negative side indifferent between columns.
        let den_p = v(0, 0) - v(1, 0) - v(0, 1) + v(1, 1);
        let p = (v(1, 1) - v(1, 0)) / den_p;
        // Positive side indifferent between rows.
        let den_q = u(0, 0) - u(0, 1) - u(1, 0) + u(1, 1);
        let q = (u(1, 1) - u(0, 1)) / den_q;
        let ok = |x: f64, den: f64| den != 0.0 && x.is_finite() && (0.0..=1.0).contains(&x);
        if ok(p, den_p) && ok(q, den_q) {
            MixedEquilibrium {
                p_pos_compete: p,
                p_neg_compete: q,
                fallback: false,
            }
        } else {
            MixedEquilibrium {
                p_pos_compete: 0.5,
                p_neg_compete: 0.5,
                fallback: true,
            }
        }
    }

    pub fn equilibrium(&self) -> EquilibriumResult {
        let pure = self.pure_nash();
        let mixed = if pure.is_empty() {
            Some(self.mixed_nash())
        } else {
            None
        };
        EquilibriumResult { pure, mixed }
    }

    /// Expected payoffs when each side competes with the given probability.
    pub fn expected(&self, p_pos_compete: f64, p_neg_compete: f64) -> (f64, f64) {
        let pr = [p_pos_compete, 1.0 - p_pos_compete];
        let pc = [p_neg_compete, 1.0 - p_neg_compete];
        let mut acc = (0.0, 0.0);
        for (r, wr) in pr.iter().enumerate() {
            for (c, wc) in pc.iter().enumerate() {
                acc.0 += wr * wc * self.payoff[r][c].0;
                acc.1 += wr * wc * self.payoff[r][c].1;
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedEquilibrium {
    pub p_pos_compete: f64,
    pub p_neg_compete: f64,
    pub fallback: bool,
}

/// Pure equilibria, or the mixed one when there are none.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub pure: Vec<(StrategyChoice, StrategyChoice)>,
    pub mixed: Option<MixedEquilibrium>,
}

/// Produces the current game of a contradiction from agent/world state.
pub trait PayoffProvider<S: ?Sized> {
    fn game(&self, state: &S) -> Game2x2;
}

impl<S: ?Sized, F: Fn(&S) -> Game2x2> PayoffProvider<S> for F {
    fn game(&self, state: &S) -> Game2x2 {
        self(state)
    }
}

/// Pheromone concentrations of the cells an ant is about to choose between.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PheromoneContext {
    pub concentrations: Vec<f64>,
    /// Evidence in [0, 1] from remembering a source reachable through these
    /// cells; it sets a floor under the trail evidence of the best cell.
    pub recall: f64,
}

/// Shape of the forage-payoff probability model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForageModel {
    /// Normalized concentration below which a trail reads as depleted.
    pub stale_threshold: f64,
    /// Concentration at which normalization reaches one half.
    pub half_saturation: f64,
    /// Logistic steepness.
    pub steepness: f64,
    /// Gain of a random step at discovering a source when no trail is around.
    pub exploration_drive: f64,
}

impl Default for ForageModel {
    fn default() -> Self {
        Self {
            stale_threshold: 0.1,
            half_saturation: 1.0,
            steepness: 12.0,
            exploration_drive: 0.3,
        }
    }
}

impl ForageModel {
    /// Trail evidence in (-1, 1): negative for stale traces, zero for no trace.
    pub fn trail_evidence(&self, concentration: f64) -> f64 {
        if concentration <= 0.0 {
            return 0.0;
        }
        let norm = concentration / (concentration + self.half_saturation);
        let logistic = 1.0 / (1.0 + (-self.steepness * (norm - self.stale_threshold)).exp());
        2.0 * logistic - 1.0
    }
}

/// The four probability changes of the explore/exploit forage game.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForagePayoffs {
    pub new_random: f64,
    pub new_follow: f64,
    pub old_high: f64,
    pub old_low: f64,
}

impl ForagePayoffs {
    pub fn compute(ctx: &PheromoneContext, model: &ForageModel) -> Self {
        if ctx.concentrations.is_empty() {
            return Self {
                new_random: 0.0,
                new_follow: 0.0,
                old_high: 0.0,
                old_low: 0.0,
            };
        }
        let high = ctx.concentrations.iter().copied().fold(f64::MIN, f64::max);
        let low = ctx.concentrations.iter().copied().fold(f64::MAX, f64::min);
        let recall = ctx.recall.clamp(0.0, 1.0);
        let evidence = model.trail_evidence(high);
        let old_high = if recall > 0.0 { evidence.max(recall) } else { evidence };
        let old_low = 0.5 * (model.trail_evidence(low) - old_high);
        let live = old_high.max(0.0);
        let drive = model.exploration_drive;
        Self {
            new_random: drive * (1.0 - live),
            new_follow: live - drive,
            old_high,
            old_low,
        }
    }
}

/// Explore (positive side) against exploit (negative side). Exploring
/// competes by walking randomly and cooperates by following trails;
/// exploiting competes by heading to high concentration and cooperates by
/// heading to low concentration.
pub fn ant_forage_payoffs(ctx: &PheromoneContext, model: &ForageModel) -> Game2x2 {
    let p = ForagePayoffs::compute(ctx, model);
    if ctx.concentrations.is_empty() {
        return Game2x2::separable([0.0, 0.0], [0.0, 0.0]).expect("finite");
    }
    Game2x2::separable([p.new_random, p.new_follow], [p.old_high, p.old_low])
        .expect("forage payoffs are finite")
}
