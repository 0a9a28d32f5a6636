//! Spatial iterated prisoner's dilemma with an accumulated cooperation
//! intention.
//!
//! Each round every agent plays its Moore (or von Neumann) neighbors,
//! cooperating iff its intention is positive. Realized payoffs accumulate
//! by own action; so do the payoffs the opposite action would have earned.
//! Intention rises when cooperation looks better overall or when most
//! neighbors cooperated, and falls otherwise.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Scenario, ScenarioError};
use crate::contradiction::{ContradictionId, ContradictionState};
use crate::game::{Game2x2, StrategyChoice};
use crate::metrics::SwarmSnapshot;

pub const INTENTION: &str = "intention";

/// How the foregone payoff of the opposite action is imagined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Counterfactual {
    /// The encounter would have been symmetric: both playing my opposite action.
    #[default]
    Mirrored,
    /// The opponent's action stays as it was.
    FixedOpponent,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Neighborhood {
    #[default]
    Moore,
    VonNeumann,
}

impl Neighborhood {
    fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Neighborhood::Moore => &[(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)],
            Neighborhood::VonNeumann => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdConfig {
    /// Side of the square lattice.
    pub grid: usize,
    pub population: usize,
    /// Agents take one random step to a free adjacent cell after each round.
    pub mobile: bool,
    /// Intention is clamped to `[-intention_max, intention_max]`.
    pub intention_max: i32,
    /// Initial intentions are uniform integers in `[-initial_intention, initial_intention]`.
    pub initial_intention: i32,
    pub counterfactual: Counterfactual,
    pub neighborhood: Neighborhood,
}

impl Default for PdConfig {
    fn default() -> Self {
        Self {
            grid: 100,
            population: 1000,
            mobile: false,
            intention_max: 10,
            initial_intention: 3,
            counterfactual: Counterfactual::Mirrored,
            neighborhood: Neighborhood::Moore,
        }
    }
}

impl PdConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Config(m));
        if self.grid == 0 {
            return bad("pd.grid must be positive".into());
        }
        if self.population == 0 || self.population > self.grid * self.grid {
            return bad(format!(
                "pd.population must lie in [1, {}], got {}",
                self.grid * self.grid,
                self.population
            ));
        }
        if self.intention_max < 1 {
            return bad("pd.intention_max must be at least 1".into());
        }
        if !(0..=self.intention_max).contains(&self.initial_intention) {
            return bad(format!(
                "pd.initial_intention must lie in [0, {}], got {}",
                self.intention_max, self.initial_intention
            ));
        }
        Ok(())
    }
}

/// The dilemma with defection as the competing strategy:
/// (D,D) = (1,1), (D,C) = (5,0), (C,D) = (0,5), (C,C) = (3,3).
pub fn dilemma() -> Game2x2 {
    Game2x2::new([[(1.0, 1.0), (5.0, 0.0)], [(0.0, 5.0), (3.0, 3.0)]]).expect("finite payoffs")
}

fn choice(cooperate: bool) -> StrategyChoice {
    if cooperate {
        StrategyChoice::Cooperate
    } else {
        StrategyChoice::Compete
    }
}

/// Payoff to an agent playing `me` against `opponent` (true = cooperate).
pub fn payoff(game: &Game2x2, me: bool, opponent: bool) -> f64 {
    game.payoff(choice(me), choice(opponent)).0
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PdAgentState {
    pub intention: i32,
    /// Realized payoffs earned while cooperating.
    pub gain_cooperate: f64,
    /// Realized payoffs earned while defecting.
    pub gain_defect: f64,
    /// What defecting would have earned in rounds where the agent cooperated.
    pub foregone_cooperate: f64,
    /// What cooperating would have earned in rounds where the agent defected.
    pub foregone_defect: f64,
}

impl PdAgentState {
    pub fn cooperates(&self) -> bool {
        self.intention > 0
    }

    /// +1 when cooperation's realized-plus-foregone total beats defection's,
    /// or when cooperating neighbors outnumber defecting ones; -1 otherwise.
    pub fn intention_delta(&self, cooperating: usize, defecting: usize) -> i32 {
        let favour = self.gain_cooperate + self.foregone_defect > self.gain_defect + self.foregone_cooperate;
        if favour || cooperating > defecting {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdAgent {
    pub x: usize,
    pub y: usize,
    pub state: PdAgentState,
}

pub struct PdScenario {
    config: PdConfig,
    rng: ChaCha8Rng,
    game: Game2x2,
    agents: Vec<PdAgent>,
    grid: Vec<Option<usize>>,
    round: u64,
    id: ContradictionId,
}

impl PdScenario {
    pub fn new(config: PdConfig, seed: u64) -> Result<Self, ScenarioError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells = rand::seq::index::sample(&mut rng, config.grid * config.grid, config.population).into_vec();
        let span = config.initial_intention;
        let agents = cells
            .into_iter()
            .map(|c| PdAgent {
                x: c % config.grid,
                y: c / config.grid,
                state: PdAgentState {
                    intention: rng.gen_range(-span..=span),
                    ..Default::default()
                },
            })
            .collect();
        Self::assemble(config, rng, agents)
    }

    /// Builds a world from explicit agent placements and states.
    pub fn from_agents(config: PdConfig, seed: u64, agents: Vec<PdAgent>) -> Result<Self, ScenarioError> {
        let config = PdConfig {
            population: agents.len(),
            ..config
        };
        config.validate()?;
        Self::assemble(config, ChaCha8Rng::seed_from_u64(seed), agents)
    }

    fn assemble(config: PdConfig, rng: ChaCha8Rng, agents: Vec<PdAgent>) -> Result<Self, ScenarioError> {
        let mut grid = vec![None; config.grid * config.grid];
        for (i, a) in agents.iter().enumerate() {
            if a.x >= config.grid || a.y >= config.grid {
                return Err(ScenarioError::Config(format!("agent {i} is outside the lattice")));
            }
            let cell = &mut grid[a.y * config.grid + a.x];
            if cell.is_some() {
                return Err(ScenarioError::Config(format!("agent {i} shares a cell")));
            }
            *cell = Some(i);
        }
        Ok(Self {
            config,
            rng,
            game: dilemma(),
            agents,
            grid,
            round: 0,
            id: ContradictionId::new(INTENTION, "合作", "背叛").expect("distinct labels"),
        })
    }

    pub fn agents(&self) -> &[PdAgent] {
        &self.agents
    }

    pub fn cooperation_fraction(&self) -> f64 {
        self.agents.iter().filter(|a| a.state.cooperates()).count() as f64 / self.agents.len() as f64
    }

    fn neighbor(&self, x: usize, y: usize, (dx, dy): (i64, i64)) -> Option<(usize, usize)> {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        let g = self.config.grid as i64;
        (nx >= 0 && ny >= 0 && nx < g && ny < g).then_some((nx as usize, ny as usize))
    }

    fn play_round(&mut self) {
        let acts: Vec<bool> = self.agents.iter().map(|a| a.state.cooperates()).collect();
        let offsets = self.config.neighborhood.offsets();
        let mut tallies = vec![(0usize, 0usize); self.agents.len()];
        for i in 0..self.agents.len() {
            let (x, y) = (self.agents[i].x, self.agents[i].y);
            let me = acts[i];
            for &off in offsets {
                let Some((nx, ny)) = self.neighbor(x, y, off) else { continue };
                let Some(j) = self.grid[ny * self.config.grid + nx] else { continue };
                let opp = acts[j];
                if opp {
                    tallies[i].0 += 1;
                } else {
                    tallies[i].1 += 1;
                }
                let realized = payoff(&self.game, me, opp);
                let foregone = match self.config.counterfactual {
                    Counterfactual::FixedOpponent => payoff(&self.game, !me, opp),
                    Counterfactual::Mirrored => payoff(&self.game, !me, !me),
                };
                let s = &mut self.agents[i].state;
                if me {
                    s.gain_cooperate += realized;
                    s.foregone_cooperate += foregone;
                } else {
                    s.gain_defect += realized;
                    s.foregone_defect += foregone;
                }
            }
        }
        let cap = self.config.intention_max;
        for (a, (c, d)) in self.agents.iter_mut().zip(tallies) {
            let delta = a.state.intention_delta(c, d);
            a.state.intention = (a.state.intention + delta).clamp(-cap, cap);
        }
    }

    fn wander(&mut self) {
        let mut order: Vec<usize> = (0..self.agents.len()).collect();
        order.shuffle(&mut self.rng);
        for i in order {
            let dx = self.rng.gen_range(-1i64..=1);
            let dy = self.rng.gen_range(-1i64..=1);
            if dx == 0 && dy == 0 {
                continue;
            }
            let (x, y) = (self.agents[i].x, self.agents[i].y);
            let Some((nx, ny)) = self.neighbor(x, y, (dx, dy)) else { continue };
            let to = ny * self.config.grid + nx;
            if self.grid[to].is_none() {
                self.grid[y * self.config.grid + x] = None;
                self.grid[to] = Some(i);
                self.agents[i].x = nx;
                self.agents[i].y = ny;
            }
        }
    }
}

impl Scenario for PdScenario {
    fn contradiction_names(&self) -> Vec<String> {
        vec![INTENTION.to_string()]
    }

    fn step(&mut self) -> Result<(), ScenarioError> {
        self.play_round();
        if self.config.mobile {
            self.wander();
        }
        self.round += 1;
        Ok(())
    }

    fn steps_done(&self) -> u64 {
        self.round
    }

    fn snapshot(&self) -> SwarmSnapshot {
        let mut snap = SwarmSnapshot::new(self.round);
        let cap = self.config.intention_max as f64;
        for (i, a) in self.agents.iter().enumerate() {
            let state = ContradictionState::from_sharpness(self.id.clone(), a.state.intention as f64 / cap, 1.0)
                .expect("positive total");
            snap.push(i, INTENTION, state.sharpness());
        }
        snap
    }

    fn scalar_metrics(&self) -> Vec<(String, f64)> {
        vec![("cooperation_fraction".to_string(), self.cooperation_fraction())]
    }

    fn world_state(&self) -> Value {
        json!({
            "round": self.round,
            "agents": self.agents.iter().map(|a| json!([a.x, a.y, a.state.intention])).collect::<Vec<_>>(),
        })
    }
}
