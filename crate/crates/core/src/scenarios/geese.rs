//! Migrating goose flock.
//!
//! The frontmost bird leads at a fixed speed and heading. Every other bird
//! tracks the nearest bird ahead of it through two contradictions:
//!
//! * `c1` 安全/省力: positive when the gap to the bird ahead exceeds the ideal
//!   gap (safe but tiring), negative when it is too close;
//! * `c2` 疏远/贴近: positive when the lateral offset from the bird ahead
//!   exceeds the ideal offset, negative when it is too tight.
//!
//! Sharpness is the normalized error, clamped into (-1, 1). Speeds change by
//! a fixed step (accelerate/decelerate), lateral position by a fixed step
//! (move in/out).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Scenario, ScenarioError};
use crate::behavior::{select_with_potential, ActionPair, Behavior, BehaviorOutlook, InteractionContext, PotentialPolicy};
use crate::contradiction::{ActionQuadruple, ContradictionId, ContradictionState, Individual};
use crate::environment::ContinuousWorld;
use crate::game::{Game2x2, StrategyChoice};
use crate::metrics::SwarmSnapshot;

pub const GAP: &str = "c1";
pub const LATERAL: &str = "c2";

const SHARPNESS_LIMIT: f64 = 0.999_999;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GooseConfig {
    pub flock: usize,
    /// Ideal longitudinal gap to the bird ahead.
    pub ideal_gap: f64,
    pub gap_min: f64,
    pub gap_max: f64,
    /// Ideal lateral offset from the bird ahead.
    pub lateral_offset: f64,
    /// Lateral error that maps to sharpness 1.
    pub lateral_band: f64,
    /// Leader speed; followers start uniformly within the speed limits.
    pub speed: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    /// Speed change of one accelerate/decelerate action.
    pub speed_step: f64,
    /// Lateral displacement of one move-in/move-out action.
    pub lateral_step: f64,
    /// Steps ahead over which the gap error is anticipated.
    pub horizon: f64,
    /// Normalized errors below this are treated as zero by the internal games.
    pub dead_band: f64,
    /// Initial positions are uniform in `[0, spawn_length] x [-spawn_width/2, spawn_width/2]`.
    pub spawn_length: f64,
    pub spawn_width: f64,
    /// Birds within this distance interact.
    pub neighbor_radius: f64,
    pub policy: PotentialPolicy,
}

impl Default for GooseConfig {
    fn default() -> Self {
        Self {
            flock: 12,
            ideal_gap: 3.0,
            gap_min: 1.5,
            gap_max: 5.0,
            lateral_offset: 1.5,
            lateral_band: 2.0,
            speed: 1.0,
            speed_min: 0.5,
            speed_max: 1.5,
            speed_step: 0.02,
            lateral_step: 0.04,
            horizon: 5.0,
            dead_band: 0.02,
            spawn_length: 30.0,
            spawn_width: 20.0,
            neighbor_radius: 6.0,
            policy: PotentialPolicy::default(),
        }
    }
}

impl GooseConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: &str| Err(ScenarioError::Config(m.to_string()));
        if !(10..=20).contains(&self.flock) {
            return Err(ScenarioError::Config(format!("geese.flock must lie in [10, 20], got {}", self.flock)));
        }
        if !(0.0 < self.gap_min && self.gap_min < self.ideal_gap && self.ideal_gap < self.gap_max) {
            return bad("geese gaps must satisfy 0 < gap_min < ideal_gap < gap_max");
        }
        if !(0.0 < self.speed_min && self.speed_min <= self.speed && self.speed <= self.speed_max) {
            return bad("geese speeds must satisfy 0 < speed_min <= speed <= speed_max");
        }
        if !(self.lateral_offset >= 0.0 && self.lateral_band > 0.0) {
            return bad("geese.lateral_band must be positive and lateral_offset non-negative");
        }
        if !(self.speed_step > 0.0 && self.lateral_step > 0.0 && self.horizon >= 0.0 && self.dead_band >= 0.0) {
            return bad("geese step sizes must be positive, horizon and dead_band non-negative");
        }
        if !(self.spawn_length > 0.0 && self.spawn_width >= 0.0 && self.neighbor_radius > 0.0) {
            return bad("geese spawn area and neighbor radius must be positive");
        }
        self.policy.validate()?;
        Ok(())
    }

    fn gap_error(&self, gap: f64) -> f64 {
        (gap - self.ideal_gap) / (self.gap_max - self.gap_min)
    }

    fn lateral_error(&self, offset: f64) -> f64 {
        (offset.abs() - self.lateral_offset) / self.lateral_band
    }
}

/// Observable state of one bird.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GooseProps {
    pub x: f64,
    pub y: f64,
    pub speed: f64,
    /// Anticipated normalized gap error.
    pub gap_error: f64,
    /// Normalized lateral error.
    pub lateral_error: f64,
}

/// One minus the mean magnitude of both errors, each capped at 1.
pub fn goose_utility(p: &GooseProps) -> f64 {
    1.0 - 0.5 * (p.gap_error.abs().min(1.0) + p.lateral_error.abs().min(1.0))
}

/// Internal game of a contradiction whose sharpness tracks a signed error:
/// the positive side competing pushes the error up, the negative side
/// competing pulls it down. Outside the dead band the side that shrinks the
/// error competes and the other cooperates.
pub fn correction_game(error: f64, dead_band: f64) -> Game2x2 {
    let e = if error.abs() <= dead_band { 0.0 } else { error };
    Game2x2::separable([-e, e], [e, -e]).expect("finite payoffs")
}

/// +1 when the negative side prevails, -1 when the positive side does, 0 otherwise.
fn direction(pair: ActionPair) -> f64 {
    use StrategyChoice::*;
    match (pair.pos, pair.neg) {
        (Compete, Cooperate) => -1.0,
        (Cooperate, Compete) => 1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug)]
struct Target {
    ahead_x: f64,
    ahead_y: f64,
    ahead_speed: f64,
    /// +1 when this bird sits on the positive-y side of the bird ahead.
    side: f64,
}

struct Outlook<'a> {
    config: &'a GooseConfig,
    target: Target,
}

impl Outlook<'_> {
    fn props(&self, x: f64, y: f64, speed: f64) -> GooseProps {
        let t = self.target;
        let gap = t.ahead_x + t.ahead_speed - (x + speed);
        let anticipated = gap + self.config.horizon * (t.ahead_speed - speed);
        GooseProps {
            x,
            y,
            speed,
            gap_error: self.config.gap_error(anticipated),
            lateral_error: self.config.lateral_error(y - t.ahead_y),
        }
    }
}

impl BehaviorOutlook<GooseProps> for Outlook<'_> {
    fn predict(&self, goose: &Individual<GooseProps>, behavior: &Behavior) -> GooseProps {
        let c = self.config;
        let p = goose.properties;
        // 省力 prevailing closes the gap; 贴近 prevailing moves toward the bird ahead.
        let speed = (p.speed + direction(behavior.pair(0)) * c.speed_step).clamp(c.speed_min, c.speed_max);
        let y = p.y - direction(behavior.pair(1)) * self.target.side * c.lateral_step;
        self.props(p.x, y, speed)
    }
}

pub struct GeeseScenario {
    config: GooseConfig,
    rng: ChaCha8Rng,
    birds: Vec<Individual<GooseProps>>,
    world: ContinuousWorld,
    leader: usize,
    step: u64,
}

impl GeeseScenario {
    pub fn new(config: GooseConfig, seed: u64) -> Result<Self, ScenarioError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gap_id = ContradictionId::new(GAP, "安全", "省力")?;
        let lat_id = ContradictionId::new(LATERAL, "疏远", "贴近")?;
        let mut birds = Vec::with_capacity(config.flock);
        for id in 0..config.flock {
            let props = GooseProps {
                x: rng.gen_range(0.0..config.spawn_length),
                y: rng.gen_range(-0.5..=0.5) * config.spawn_width,
                speed: rng.gen_range(config.speed_min..=config.speed_max),
                ..Default::default()
            };
            let states = vec![
                ContradictionState::new(gap_id.clone(), 1.0, 1.0)?,
                ContradictionState::new(lat_id.clone(), 1.0, 1.0)?,
            ];
            let bird = Individual::new(id, states, props, Arc::new(goose_utility))?
                .with_actions(GAP, ActionQuadruple::uniform(config.speed_step))?
                .with_actions(LATERAL, ActionQuadruple::uniform(config.lateral_step / config.lateral_band))?;
            birds.push(bird);
        }
        let mut s = Self {
            config,
            rng,
            birds,
            world: ContinuousWorld::default(),
            leader: 0,
            step: 0,
        };
        s.refresh()?;
        Ok(s)
    }

    pub fn birds(&self) -> &[Individual<GooseProps>] {
        &self.birds
    }

    pub fn leader(&self) -> usize {
        self.leader
    }

    /// Nearest bird strictly ahead (larger x), if any.
    fn ahead_of(&self, i: usize) -> Option<usize> {
        let me = self.birds[i].properties;
        self.world
            .within(i, f64::INFINITY)
            .into_iter()
            .find(|&(j, _)| self.birds[j].properties.x > me.x)
            .map(|(j, _)| j)
    }

    fn target(&self, i: usize) -> Option<Target> {
        let j = self.ahead_of(i)?;
        let (me, ahead) = (self.birds[i].properties, self.birds[j].properties);
        let dy = me.y - ahead.y;
        let side = if dy.abs() > 1e-9 {
            dy.signum()
        } else if (me.y - self.birds[self.leader].properties.y).abs() > 1e-9 {
            (me.y - self.birds[self.leader].properties.y).signum()
        } else if i.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        Some(Target {
            ahead_x: ahead.x,
            ahead_y: ahead.y,
            ahead_speed: ahead.speed,
            side,
        })
    }

    /// Re-elects the leader and recomputes every bird's errors and sharpness.
    fn refresh(&mut self) -> Result<(), ScenarioError> {
        self.world = ContinuousWorld::new(self.birds.iter().map(|b| [b.properties.x, b.properties.y]).collect());
        self.leader = (0..self.birds.len())
            .max_by(|&a, &b| self.birds[a].properties.x.total_cmp(&self.birds[b].properties.x))
            .unwrap_or(0);
        for i in 0..self.birds.len() {
            let (gap, lateral) = if i == self.leader {
                (0.0, 0.0)
            } else {
                let t = self.target(i).expect("non-leaders have a bird ahead");
                let p = self.birds[i].properties;
                let gap = t.ahead_x - p.x;
                (self.config.gap_error(gap), self.config.lateral_error(p.y - t.ahead_y))
            };
            let anticipated = if i == self.leader {
                0.0
            } else {
                let t = self.target(i).expect("non-leaders have a bird ahead");
                let p = self.birds[i].properties;
                Outlook { config: &self.config, target: t }.props(p.x, p.y, p.speed).gap_error
            };
            let b = &mut self.birds[i];
            b.properties.gap_error = anticipated;
            b.properties.lateral_error = lateral;
            b.contradiction_mut(GAP)?.set_sharpness(gap.clamp(-SHARPNESS_LIMIT, SHARPNESS_LIMIT))?;
            b.contradiction_mut(LATERAL)?.set_sharpness(lateral.clamp(-SHARPNESS_LIMIT, SHARPNESS_LIMIT))?;
        }
        Ok(())
    }

    fn contexts(&self, i: usize) -> Vec<InteractionContext> {
        let near = self.world.within(i, self.config.neighbor_radius);
        if near.is_empty() {
            return Vec::new();
        }
        let crowded = near.iter().filter(|(_, d)| *d < self.config.gap_min).count();
        let pressure = crowded as f64 / near.len() as f64;
        let mut participants = vec![i];
        participants.extend(near.iter().map(|(j, _)| *j));
        [(GAP, "slipstream"), (LATERAL, "airspace")]
            .into_iter()
            .map(|(focal, resource)| InteractionContext {
                center: i,
                focal: focal.to_string(),
                participants: participants.clone(),
                contested: vec![resource.to_string()],
                pressure,
                sharpness: participants
                    .iter()
                    .map(|&j| self.birds[j].contradiction(focal).map(|c| c.sharpness()).unwrap_or(0.0))
                    .collect(),
            })
            .collect()
    }
}

impl Scenario for GeeseScenario {
    fn contradiction_names(&self) -> Vec<String> {
        vec![GAP.to_string(), LATERAL.to_string()]
    }

    fn step(&mut self) -> Result<(), ScenarioError> {
        let c = &self.config;
        let mut next = Vec::with_capacity(self.birds.len());
        for i in 0..self.birds.len() {
            let p = self.birds[i].properties;
            if i == self.leader {
                next.push((p.x + c.speed, p.y, c.speed));
                continue;
            }
            let target = self.target(i).expect("non-leaders have a bird ahead");
            let outlook = Outlook { config: c, target };
            let games = [
                correction_game(p.gap_error, c.dead_band),
                correction_game(p.lateral_error, c.dead_band),
            ];
            let contexts = self.contexts(i);
            let choice = select_with_potential(&self.birds[i], &games, &outlook, &contexts, &c.policy, &mut self.rng)?;
            let moved = outlook.predict(&self.birds[i], &choice.behavior);
            next.push((p.x + moved.speed, moved.y, moved.speed));
        }
        for (b, (x, y, speed)) in self.birds.iter_mut().zip(next) {
            b.properties.x = x;
            b.properties.y = y;
            b.properties.speed = speed;
        }
        self.refresh()?;
        self.step += 1;
        Ok(())
    }

    fn steps_done(&self) -> u64 {
        self.step
    }

    fn snapshot(&self) -> SwarmSnapshot {
        let mut snap = SwarmSnapshot::new(self.step);
        for b in &self.birds {
            for (name, v) in [GAP, LATERAL].iter().zip(b.sharpness_vector()) {
                let v = if b.id == self.leader { 0.0 } else { v };
                snap.push(b.id, *name, v);
            }
        }
        snap
    }

    fn scalar_metrics(&self) -> Vec<(String, f64)> {
        let followers: Vec<&Individual<GooseProps>> = self.birds.iter().filter(|b| b.id != self.leader).collect();
        let mean = followers.iter().map(|b| goose_utility(&b.properties)).sum::<f64>() / followers.len() as f64;
        vec![("mean_utility".to_string(), mean)]
    }

    fn world_state(&self) -> Value {
        json!({
            "step": self.step,
            "leader": self.leader,
            "birds": self.birds.iter().map(|b| json!([b.properties.x, b.properties.y, b.properties.speed])).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flock_size_bounds() {
        for flock in [9, 21] {
            assert!(matches!(
                GeeseScenario::new(GooseConfig { flock, ..Default::default() }, 0),
                Err(ScenarioError::Config(_))
            ));
        }
        assert!(GeeseScenario::new(GooseConfig { ideal_gap: 6.0, ..Default::default() }, 0).is_err());
        assert!(GeeseScenario::new(GooseConfig::default(), 0).is_ok());
    }

    #[test]
    fn balanced_bird_holds() {
        let config = GooseConfig::default();
        let g = correction_game(0.0, config.dead_band);
        assert_eq!(g.pure_nash().len(), 4);
        let outlook = Outlook {
            config: &config,
            target: Target {
                ahead_x: 10.0,
                ahead_y: 0.0,
                ahead_speed: 1.0,
                side: 1.0,
            },
        };
        let p = outlook.props(7.0, 1.5, 1.0);
        assert_eq!(p.gap_error, 0.0);
        assert_eq!(p.lateral_error, 0.0);
        assert_eq!(goose_utility(&p), 1.0);
    }

    #[test]
    fn bird_far_behind_accelerates() {
        // Gap 6.5 at equal speeds: error (6.5 - 3) / 3.5 = 1.0.
        let config = GooseConfig::default();
        assert!((config.gap_error(6.5) - 1.0).abs() < 1e-12);
        let g = correction_game(1.0, config.dead_band);
        let eq = g.pure_nash();
        assert_eq!(eq, vec![(StrategyChoice::Cooperate, StrategyChoice::Compete)]);
        let pair = ActionPair::new(eq[0].0, eq[0].1);
        let outlook = Outlook {
            config: &config,
            target: Target {
                ahead_x: 10.0,
                ahead_y: 0.0,
                ahead_speed: 1.0,
                side: 1.0,
            },
        };
        let ind = Individual::new(
            0,
            vec![
                ContradictionState::new(ContradictionId::new(GAP, "a", "b").unwrap(), 1.0, 1.0).unwrap(),
                ContradictionState::new(ContradictionId::new(LATERAL, "a", "b").unwrap(), 1.0, 1.0).unwrap(),
            ],
            GooseProps {
                x: 3.5,
                y: 1.5,
                speed: 1.0,
                ..Default::default()
            },
            Arc::new(goose_utility),
        )
        .unwrap();
        let moved = outlook.predict(&ind, &Behavior(vec![pair, ActionPair::ALL[0]]));
        assert!((moved.speed - 1.02).abs() < 1e-12);
        // Next gap 10 + 1 - (3.5 + 1.02) = 6.48, anticipated 6.48 + 5 * (-0.02) = 6.38.
        assert!((moved.gap_error - (6.38 - 3.0) / 3.5).abs() < 1e-12);
    }

    #[test]
    fn leader_is_frontmost_and_balanced() {
        let s = GeeseScenario::new(GooseConfig::default(), 3).unwrap();
        let lx = s.birds()[s.leader()].properties.x;
        assert!(s.birds().iter().all(|b| b.properties.x <= lx));
        let snap = s.snapshot();
        assert_eq!(snap.values(GAP)[s.leader()], 0.0);
        assert_eq!(snap.values(LATERAL)[s.leader()], 0.0);
    }

    #[test]
    fn size_and_speed_limits_hold() {
        let config = GooseConfig::default();
        let mut s = GeeseScenario::new(config.clone(), 4).unwrap();
        for _ in 0..300 {
            s.step().unwrap();
            assert_eq!(s.birds().len(), config.flock);
            for b in s.birds() {
                assert!(b.properties.speed >= config.speed_min && b.properties.speed <= config.speed_max);
            }
            for v in s.snapshot().samples.iter().map(|x| x.lambda) {
                assert!(v.abs() < 1.0);
            }
        }
    }

    #[test]
    fn same_seed_same_flight() {
        let run = |seed| {
            let mut s = GeeseScenario::new(GooseConfig::default(), seed).unwrap();
            for _ in 0..100 {
                s.step().unwrap();
            }
            s.world_state()
        };
        assert_eq!(run(8), run(8));
    }
}
