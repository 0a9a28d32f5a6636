//! Ant colony foraging on a grid.
//!
//! Two contradictions drive each ant:
//!
//! * `c1` 探索/利用: explore for new sources or exploit known trails;
//! * `c2` 安全/碰撞: keep clear of other ants or risk collisions.
//!
//! The `c1` pair picks the movement mode. Exploring by competing walks at
//! random; exploring by cooperating follows a trail, toward high pheromone
//! when exploitation competes and toward low pheromone when it cooperates.
//! On a trail, laden ants step strictly toward the nest, ants that remember
//! a source strictly toward it, and searching ants outward from the nest.
//! When safety competes, the least crowded cells are kept. Laden ants and
//! ants that know a source put `c2` before `c1`, so crowding is weighed
//! before scent; the others put `c1` first.
//!
//! Ants move one at a time in a fresh random order each step.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Scenario, ScenarioError};
use crate::behavior::{select_with_potential, ActionPair, Behavior, BehaviorOutlook, PotentialPolicy, ResourceClaim};
use crate::contradiction::{
    ActionKind, ActionQuadruple, ContradictionId, ContradictionState, ImportanceOrder, Individual, ResourceNeed,
};
use crate::environment::{build_interactions, Cell, Claim, GridWorld, InteractionRules};
use crate::game::{ant_forage_payoffs, ForageModel, Game2x2, PheromoneContext, StrategyChoice};
use crate::metrics::SwarmSnapshot;

pub const EXPLORE: &str = "c1";
pub const SAFETY: &str = "c2";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntConfig {
    /// Side of the square grid; the nest sits in the middle.
    pub grid: usize,
    pub sources: usize,
    pub units_per_source: u32,
    pub ants: usize,
    pub evaporation: f64,
    /// Pheromone laid per step by a laden ant.
    pub deposit: f64,
    /// A cell with more neighboring ants than this counts as crowded.
    pub crowd_threshold: usize,
    /// Sources are placed at least this many steps from the nest.
    pub source_min_distance: usize,
    /// Force change of one explore/exploit action.
    pub force_step: f64,
    /// Upper limit of either explore/exploit force.
    pub force_cap: f64,
    /// Trail evidence an ant assigns to the way back to a source it remembers.
    pub recall: f64,
    pub forage: ForageModel,
    pub policy: PotentialPolicy,
}

impl Default for AntConfig {
    fn default() -> Self {
        Self {
            grid: 50,
            sources: 3,
            units_per_source: 30,
            ants: 60,
            evaporation: 0.02,
            deposit: 1.0,
            crowd_threshold: 2,
            source_min_distance: 10,
            force_step: 0.1,
            force_cap: 1.0,
            recall: 0.8,
            forage: ForageModel::default(),
            policy: PotentialPolicy::default(),
        }
    }
}

impl AntConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::Config(m));
        if self.grid < 10 {
            return bad(format!("ants.grid must be at least 10, got {}", self.grid));
        }
        if self.sources == 0 || self.units_per_source == 0 || self.ants == 0 {
            return bad("ants.sources, ants.units_per_source and ants.ants must be positive".into());
        }
        if self.source_min_distance == 0 || self.source_min_distance > self.grid / 2 - 1 {
            return bad(format!(
                "ants.source_min_distance must lie in [1, {}], got {}",
                self.grid / 2 - 1,
                self.source_min_distance
            ));
        }
        if !(0.0..1.0).contains(&self.evaporation) || self.deposit.is_nan() || self.deposit < 0.0 {
            return bad("ants.evaporation must lie in [0, 1) and ants.deposit be non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.recall) {
            return bad(format!("ants.recall must lie in [0, 1], got {}", self.recall));
        }
        if !(self.force_step > 0.0 && self.force_cap > self.force_step) {
            return bad("ants.force_cap must exceed ants.force_step > 0".into());
        }
        self.policy.validate()?;
        Ok(())
    }
}

/// Observable state of one ant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntProps {
    pub cell: Cell,
    pub nest: Cell,
    pub laden: bool,
    /// Steps taken since leaving the nest, or since the pickup while laden.
    pub steps: u32,
    /// Source this ant last took food from.
    pub known: Option<Cell>,
}

/// Shortest nest-to-source distance relative to the ant's current walk
/// between nest and known source: the steps so far plus the distance still to
/// go. Laden ants walk from the source home, others out to it. Ants knowing
/// no source score 0.
pub fn route_efficiency(p: &AntProps) -> f64 {
    let Some(fs) = p.known else {
        return 0.0;
    };
    let goal = if p.laden { p.nest } else { fs };
    let route = p.steps as usize + p.cell.chebyshev(goal);
    let shortest = p.nest.chebyshev(fs);
    if route == 0 {
        1.0
    } else {
        (shortest as f64 / route as f64).clamp(0.0, 1.0)
    }
}

/// Best ratio, over known sources, of the shortest nest-to-source distance to
/// the length of `route` (a walk that starts or ends at the nest). No known
/// source scores 0.
pub fn ant_utility(route: &[Cell], known: &[Cell], nest: Cell) -> f64 {
    let steps = route.len().saturating_sub(1);
    known
        .iter()
        .map(|fs| {
            let shortest = nest.chebyshev(*fs);
            if steps == 0 || shortest >= steps {
                1.0
            } else {
                shortest as f64 / steps as f64
            }
        })
        .fold(0.0, f64::max)
}

/// Safety (positive side) competes by avoiding crowded cells once the share
/// of occupied neighbors exceeds `threshold`; collision competes by entering
/// them while the neighborhood is sparse.
pub fn crowd_game(crowding: f64, threshold: f64) -> Game2x2 {
    Game2x2::separable([crowding, threshold], [threshold, crowding]).expect("finite payoffs")
}

struct Outlook<'a> {
    world: &'a GridWorld,
    config: &'a AntConfig,
    draw: f64,
    safety_first: bool,
}

impl Outlook<'_> {
    /// Ants around `cell`, not counting the one at `me`.
    fn crowd_around(&self, cell: Cell, me: Cell) -> usize {
        self.world
            .neighbors(cell, 1)
            .into_iter()
            .filter(|c| *c != me && *c != self.world.nest() && self.world.occupant(*c).is_some())
            .count()
    }

    fn least_crowded(&self, cells: Vec<Cell>, me: Cell) -> Vec<Cell> {
        let least = cells.iter().map(|c| self.crowd_around(*c, me)).min().unwrap_or(0);
        cells.into_iter().filter(|c| self.crowd_around(*c, me) == least).collect()
    }

    fn best_trail(&self, cells: Vec<Cell>, toward_high: bool) -> Vec<Cell> {
        let sign = if toward_high { 1.0 } else { -1.0 };
        let best = cells
            .iter()
            .map(|c| sign * self.world.pheromone_at(*c))
            .fold(f64::NEG_INFINITY, f64::max);
        cells
            .into_iter()
            .filter(|c| sign * self.world.pheromone_at(*c) >= best - 1e-12)
            .collect()
    }

    /// Distance left to the ant's goal: the nest when laden, a remembered
    /// source otherwise. Searching ants have no goal.
    fn to_goal(&self, p: &AntProps, cell: Cell) -> Option<usize> {
        match (p.laden, p.known) {
            (true, _) => Some(cell.chebyshev(p.nest)),
            (false, Some(fs)) => Some(cell.chebyshev(fs)),
            (false, None) => None,
        }
    }

    /// Whether `cell` lies along the ant's heading: strictly closer to its
    /// goal, or no closer to the nest while searching.
    fn ahead(&self, p: &AntProps, cell: Cell) -> bool {
        match (self.to_goal(p, cell), self.to_goal(p, p.cell)) {
            (Some(there), Some(here)) => there < here,
            _ => cell.chebyshev(p.nest) >= p.cell.chebyshev(p.nest),
        }
    }

    /// Cells the `c1` mode allows, before crowd filtering. The flag is true
    /// for trail modes. Random steps go to any free cell; a trail blocked
    /// ahead may be left sideways.
    fn mode_cells(&self, p: &AntProps, pair: ActionPair) -> (Vec<Cell>, bool) {
        let free: Vec<Cell> = self.world.neighbors(p.cell, 1).into_iter().filter(|c| self.world.is_free(*c)).collect();
        let trail = pair.pos == StrategyChoice::Cooperate;
        let cells = match (p.laden, trail) {
            (_, true) => {
                let ahead: Vec<Cell> = free.iter().copied().filter(|c| self.ahead(p, *c)).collect();
                match self.to_goal(p, p.cell) {
                    Some(level) if ahead.is_empty() => {
                        free.into_iter().filter(|c| self.to_goal(p, *c) == Some(level)).collect()
                    }
                    _ => ahead,
                }
            }
            (_, false) => free,
        };
        (cells, trail)
    }

    /// Where `behavior` takes the ant. Avoidance keeps the least crowded
    /// cells and the trail keeps the best-scented ones; whichever
    /// contradiction matters more filters first. An avoiding ant with no
    /// way forward backs off to any free cell.
    fn destination(&self, p: &AntProps, behavior: &Behavior) -> Cell {
        let c1 = behavior.pair(0);
        let (cells, trail) = self.mode_cells(p, c1);
        let avoid = behavior.pair(1).pos == StrategyChoice::Compete;
        let toward_high = c1.neg == StrategyChoice::Compete;
        let cells = match (avoid, trail, self.safety_first) {
            (true, true, true) => self.best_trail(self.least_crowded(cells, p.cell), toward_high),
            (true, true, false) => self.least_crowded(self.best_trail(cells, toward_high), p.cell),
            (true, false, _) => self.least_crowded(cells, p.cell),
            (false, true, _) => self.best_trail(cells, toward_high),
            (false, false, _) => cells,
        };
        let cells = if cells.is_empty() && avoid {
            let free = self.world.neighbors(p.cell, 1).into_iter().filter(|c| self.world.is_free(*c)).collect();
            self.least_crowded(free, p.cell)
        } else {
            cells
        };
        if cells.is_empty() {
            p.cell
        } else {
            cells[((self.draw * cells.len() as f64) as usize).min(cells.len() - 1)]
        }
    }

    /// Concentrations along the ant's heading, plus recall of a remembered source.
    fn pheromone_context(&self, p: &AntProps) -> PheromoneContext {
        PheromoneContext {
            concentrations: self
                .world
                .neighbors(p.cell, 1)
                .into_iter()
                .filter(|c| self.ahead(p, *c))
                .map(|c| self.world.pheromone_at(c))
                .collect(),
            recall: if !p.laden && p.known.is_some() { self.config.recall } else { 0.0 },
        }
    }
}

impl BehaviorOutlook<AntProps> for Outlook<'_> {
    fn predict(&self, ant: &Individual<AntProps>, behavior: &Behavior) -> AntProps {
        let p = ant.properties;
        AntProps {
            cell: self.destination(&p, behavior),
            steps: p.steps + 1,
            ..p
        }
    }

    fn claims(&self, ant: &Individual<AntProps>, behavior: &Behavior) -> Vec<ResourceClaim> {
        let p = ant.properties;
        let to = self.destination(&p, behavior);
        let mut claims = vec![ResourceClaim::new("position", 1.0, if self.world.is_free(to) || to == p.cell { 1.0 } else { 0.0 })];
        if !p.laden {
            let stock: u32 = std::iter::once(to)
                .chain(self.world.neighbors(to, 1))
                .map(|c| self.world.food_at(c))
                .max()
                .unwrap_or(0);
            if stock > 0 {
                claims.push(ResourceClaim::new("food", 1.0, stock as f64));
            }
        }
        claims
    }
}

/// Food bookkeeping; `picked_up == delivered + in_transit` at all times.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoodLedger {
    pub initial: u64,
    pub picked_up: u64,
    pub delivered: u64,
}

pub struct AntsScenario {
    config: AntConfig,
    rng: ChaCha8Rng,
    world: GridWorld,
    ants: Vec<Individual<AntProps>>,
    sources: Vec<Cell>,
    ledger: FoodLedger,
    step: u64,
    rules: InteractionRules,
}

impl AntsScenario {
    pub fn new(config: AntConfig, seed: u64) -> Result<Self, ScenarioError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nest = Cell::new(config.grid / 2, config.grid / 2);
        let mut world = GridWorld::new(config.grid, config.grid, nest)?;
        let mut sources = Vec::with_capacity(config.sources);
        while sources.len() < config.sources {
            let c = Cell::new(rng.gen_range(0..config.grid), rng.gen_range(0..config.grid));
            if c.chebyshev(nest) >= config.source_min_distance && !sources.contains(&c) {
                world.set_food(c, config.units_per_source)?;
                sources.push(c);
            }
        }
        let explore = ContradictionId::new(EXPLORE, "探索", "利用")?;
        let safety = ContradictionId::new(SAFETY, "安全", "碰撞")?;
        let lo = 0.1 * config.force_cap;
        let mut ants = Vec::with_capacity(config.ants);
        for id in 0..config.ants {
            let props = AntProps {
                cell: nest,
                nest,
                laden: false,
                steps: 0,
                known: None,
            };
            let states = vec![
                ContradictionState::new(
                    explore.clone(),
                    rng.gen_range(lo..=config.force_cap),
                    rng.gen_range(lo..=config.force_cap),
                )?,
                ContradictionState::new(safety.clone(), 1.0, 1.0)?,
            ];
            let ant = Individual::new(id, states, props, Arc::new(route_efficiency))?
                .with_actions(EXPLORE, ActionQuadruple::uniform(config.force_step))?
                .with_actions(SAFETY, ActionQuadruple::uniform(1.0))?
                .with_order(ImportanceOrder::chain(&[EXPLORE, SAFETY]))?
                .with_needs(vec![
                    ResourceNeed {
                        resource: "position".into(),
                        max_quantity: 1.0,
                    },
                    ResourceNeed {
                        resource: "food".into(),
                        max_quantity: 1.0,
                    },
                ]);
            ants.push(ant);
        }
        let initial = world.total_food();
        let mut s = Self {
            config,
            rng,
            world,
            ants,
            sources,
            ledger: FoodLedger {
                initial,
                ..Default::default()
            },
            step: 0,
            rules: InteractionRules {
                position: SAFETY.into(),
                pheromone: EXPLORE.into(),
            },
        };
        s.track_crowding()?;
        Ok(s)
    }

    pub fn world(&self) -> &GridWorld {
        &self.world
    }

    pub fn ants(&self) -> &[Individual<AntProps>] {
        &self.ants
    }

    pub fn sources(&self) -> &[Cell] {
        &self.sources
    }

    pub fn ledger(&self) -> FoodLedger {
        self.ledger
    }

    pub fn in_transit(&self) -> u64 {
        self.ants.iter().filter(|a| a.properties.laden).count() as u64
    }

    /// Every unit picked up is delivered or still carried, and every unit is
    /// either on the grid or picked up.
    pub fn conservation_holds(&self) -> bool {
        self.ledger.picked_up == self.ledger.delivered + self.in_transit()
            && self.ledger.initial == self.world.total_food() + self.ledger.picked_up
    }

    /// Route efficiency of every laden ant.
    pub fn laden_efficiencies(&self) -> Vec<f64> {
        self.ants
            .iter()
            .filter(|a| a.properties.laden)
            .map(|a| route_efficiency(&a.properties))
            .collect()
    }

    fn sharpness(&self, agent: usize, contradiction: &str) -> f64 {
        self.ants[agent].contradiction(contradiction).map(|c| c.sharpness()).unwrap_or(0.0)
    }

    /// Sets every ant's safety/collision forces from its free and occupied neighbors.
    fn track_crowding(&mut self) -> Result<(), ScenarioError> {
        for i in 0..self.ants.len() {
            let view = self.world.neighborhood(self.ants[i].properties.cell, 1);
            let free = (view.cell_count - view.agents.len()) as f64;
            self.ants[i]
                .contradiction_mut(SAFETY)?
                .set_forces(1.0 + free, 1.0 + view.agents.len() as f64)?;
        }
        Ok(())
    }

    fn decide(&mut self, i: usize) -> Result<(Cell, ActionPair), ScenarioError> {
        let draw: f64 = self.rng.gen();
        let ant = &self.ants[i];
        let p = ant.properties;
        let outlook = Outlook {
            world: &self.world,
            config: &self.config,
            draw,
            safety_first: ant.order().precedes(SAFETY, EXPLORE),
        };
        let view = self.world.neighborhood(p.cell, 1);
        let contexts = build_interactions(&view, i, &self.rules, |a, c| self.sharpness(a, c));
        let threshold = self.config.crowd_threshold as f64 / 8.0;
        let games = [
            ant_forage_payoffs(&outlook.pheromone_context(&p), &self.config.forage),
            crowd_game(view.crowding(), threshold),
        ];
        let choice = select_with_potential(ant, &games, &outlook, &contexts, &self.config.policy, &mut self.rng)?;
        Ok((outlook.destination(&p, &choice.behavior), choice.behavior.pair(0)))
    }

    fn pick_up(&mut self, i: usize) -> Result<(), ScenarioError> {
        let p = self.ants[i].properties;
        let source = std::iter::once(p.cell)
            .chain(self.world.neighbors(p.cell, 1))
            .find(|c| self.world.food_at(*c) > 0);
        match source {
            Some(fs) => {
                self.world.claim(Claim::Food { cell: fs, quantity: 1 })?;
                self.ledger.picked_up += 1;
                let props = &mut self.ants[i].properties;
                props.laden = true;
                props.steps = 0;
                props.known = Some(fs);
            }
            None => {
                if let Some(fs) = p.known {
                    if p.cell.chebyshev(fs) <= 1 && self.world.food_at(fs) == 0 {
                        self.ants[i].properties.known = None;
                    }
                }
            }
        }
        Ok(())
    }

    fn explore_actions(&mut self, i: usize, pair: ActionPair) -> Result<(), ScenarioError> {
        let step = self.config.force_step;
        let pos = match pair.pos {
            StrategyChoice::Compete => ActionKind::StrengthenPos,
            StrategyChoice::Cooperate => ActionKind::WeakenPos,
        };
        let neg = match pair.neg {
            StrategyChoice::Compete => ActionKind::StrengthenNeg,
            StrategyChoice::Cooperate => ActionKind::WeakenNeg,
        };
        let ant = &mut self.ants[i];
        ant.apply_action(EXPLORE, pos, &[], step)?;
        ant.apply_action(EXPLORE, neg, &[], step)?;
        let c = ant.contradiction_mut(EXPLORE)?;
        let cap = self.config.force_cap;
        let (fp, fnn) = (c.force_pos().min(cap), c.force_neg().min(cap));
        c.set_forces(fp, fnn)?;
        Ok(())
    }
}

impl Scenario for AntsScenario {
    fn contradiction_names(&self) -> Vec<String> {
        vec![EXPLORE.to_string(), SAFETY.to_string()]
    }

    fn step(&mut self) -> Result<(), ScenarioError> {
        let mut order: Vec<usize> = (0..self.ants.len()).collect();
        order.shuffle(&mut self.rng);
        for i in order {
            let (to, pair) = self.decide(i)?;
            let from = self.ants[i].properties.cell;
            if to != from && self.world.claim(Claim::Position { agent: i, from: Some(from), to }).is_ok() {
                self.ants[i].properties.cell = to;
            }
            self.ants[i].properties.steps += 1;
            let p = self.ants[i].properties;
            if p.cell == p.nest {
                if p.laden {
                    self.ledger.delivered += 1;
                    self.ants[i].properties.laden = false;
                }
                self.ants[i].properties.steps = 0;
            } else if !p.laden {
                self.pick_up(i)?;
            }
            if self.ants[i].properties.laden {
                let cell = self.ants[i].properties.cell;
                self.world.deposit_pheromone(cell, self.config.deposit)?;
            }
            self.explore_actions(i, pair)?;
        }
        self.world.evaporate(self.config.evaporation)?;
        self.track_crowding()?;
        for ant in &mut self.ants {
            let p = ant.properties;
            let order = if p.laden || p.known.is_some() {
                [SAFETY, EXPLORE]
            } else {
                [EXPLORE, SAFETY]
            };
            ant.set_order(ImportanceOrder::chain(&order))?;
        }
        self.step += 1;
        Ok(())
    }

    fn steps_done(&self) -> u64 {
        self.step
    }

    fn snapshot(&self) -> SwarmSnapshot {
        let mut snap = SwarmSnapshot::new(self.step);
        for ant in &self.ants {
            for c in ant.contradictions() {
                snap.push(ant.id, c.name(), c.sharpness());
            }
        }
        snap
    }

    fn scalar_metrics(&self) -> Vec<(String, f64)> {
        let mut out = vec![("food_delivered".to_string(), self.ledger.delivered as f64)];
        let eff = self.laden_efficiencies();
        if !eff.is_empty() {
            out.push(("mean_route_efficiency".to_string(), eff.iter().sum::<f64>() / eff.len() as f64));
        }
        out
    }

    fn world_state(&self) -> Value {
        json!({
            "step": self.step,
            "ledger": self.ledger,
            "sources": self.sources.iter().map(|c| json!([c.x, c.y, self.world.food_at(*c)])).collect::<Vec<_>>(),
            "ants": self.ants.iter().map(|a| json!([a.properties.cell.x, a.properties.cell.y, a.properties.laden])).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn props(cell: Cell) -> AntProps {
        AntProps {
            cell,
            nest: Cell::new(5, 5),
            laden: false,
            steps: 0,
            known: None,
        }
    }

    #[test]
    fn utility_examples() {
        let nest = Cell::new(0, 0);
        let fs = Cell::new(4, 0);
        let straight: Vec<Cell> = (0..=4).map(|x| Cell::new(x, 0)).collect();
        assert_eq!(ant_utility(&straight, &[fs], nest), 1.0);
        let detour: Vec<Cell> = (0..=8).map(|i| Cell::new(i.min(4), i.saturating_sub(4))).collect();
        assert_eq!(ant_utility(&detour, &[fs], nest), 0.5);
        assert_eq!(ant_utility(&straight, &[], nest), 0.0);
        // The best known source counts.
        assert_eq!(ant_utility(&detour, &[fs, Cell::new(8, 8)], nest), 1.0);
    }

    #[test]
    fn route_efficiency_of_walks() {
        let mut p = props(Cell::new(9, 5));
        assert_eq!(route_efficiency(&p), 0.0);
        p.known = Some(Cell::new(9, 5));
        assert_eq!(route_efficiency(&p), 1.0);
        // Heading out: two steps taken, four to go on a four-step route.
        p.cell = Cell::new(5, 7);
        p.steps = 2;
        assert!((route_efficiency(&p) - 4.0 / 6.0).abs() < 1e-12);
        // Laden: two sideways steps on the way home from the source.
        p.laden = true;
        p.cell = Cell::new(9, 7);
        p.steps = 2;
        assert!((route_efficiency(&p) - 4.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn crowd_game_equilibria() {
        use StrategyChoice::*;
        assert_eq!(crowd_game(0.5, 0.25).pure_nash(), vec![(Compete, Cooperate)]);
        assert_eq!(crowd_game(0.0, 0.25).pure_nash(), vec![(Cooperate, Compete)]);
    }

    #[test]
    fn config_checks() {
        assert!(AntsScenario::new(AntConfig { grid: 9, ..Default::default() }, 0).is_err());
        assert!(AntsScenario::new(AntConfig { sources: 0, ..Default::default() }, 0).is_err());
        assert!(AntsScenario::new(AntConfig { evaporation: 1.0, ..Default::default() }, 0).is_err());
        assert!(AntsScenario::new(AntConfig::default(), 0).is_ok());
    }

    #[test]
    fn sources_are_placed_away_from_nest() {
        let s = AntsScenario::new(AntConfig::default(), 2).unwrap();
        assert_eq!(s.sources().len(), 3);
        for fs in s.sources() {
            assert!(fs.chebyshev(s.world().nest()) >= 10);
            assert_eq!(s.world().food_at(*fs), 30);
        }
        assert_eq!(s.ledger().initial, 90);
    }

    fn lone_ant(p: AntProps) -> Individual<AntProps> {
        let id = |n| ContradictionId::new(n, "a", "b").unwrap();
        Individual::new(
            0,
            vec![
                ContradictionState::new(id(EXPLORE), 1.0, 1.0).unwrap(),
                ContradictionState::new(id(SAFETY), 1.0, 1.0).unwrap(),
            ],
            p,
            Arc::new(route_efficiency),
        )
        .unwrap()
    }

    #[test]
    fn no_trail_means_random_walk() {
        let world = GridWorld::new(11, 11, Cell::new(5, 5)).unwrap();
        let config = AntConfig::default();
        let outlook = Outlook {
            world: &world,
            config: &config,
            draw: 0.0,
            safety_first: false,
        };
        let p = props(Cell::new(7, 5));
        let game = ant_forage_payoffs(&outlook.pheromone_context(&p), &config.forage);
        assert!(game.pure_nash().iter().all(|(pos, _)| *pos == StrategyChoice::Compete));
    }

    #[test]
    fn laden_ant_follows_trail_home() {
        let mut world = GridWorld::new(11, 11, Cell::new(5, 5)).unwrap();
        world.deposit_pheromone(Cell::new(8, 6), 2.0).unwrap();
        world.deposit_pheromone(Cell::new(8, 5), 0.5).unwrap();
        let config = AntConfig::default();
        let outlook = Outlook {
            world: &world,
            config: &config,
            draw: 0.9,
            safety_first: true,
        };
        let mut p = props(Cell::new(9, 6));
        p.laden = true;
        p.known = Some(Cell::new(9, 5));
        let game = ant_forage_payoffs(&outlook.pheromone_context(&p), &config.forage);
        let eq = game.pure_nash();
        assert_eq!(eq, vec![(StrategyChoice::Cooperate, StrategyChoice::Compete)]);
        let ant = lone_ant(p);
        let b = Behavior(vec![ActionPair::new(eq[0].0, eq[0].1), ActionPair::ALL[3]]);
        let next = outlook.predict(&ant, &b);
        assert_eq!(next.cell, Cell::new(8, 6));
        assert_eq!(route_efficiency(&next), 1.0);
    }

    #[test]
    fn crowded_cells_are_avoided() {
        let mut world = GridWorld::new(11, 11, Cell::new(0, 0)).unwrap();
        // Ants around (6, 5) make it crowded; (4, 5) stays calm.
        for (agent, c) in [(1, Cell::new(7, 4)), (2, Cell::new(7, 5)), (3, Cell::new(7, 6))] {
            world.claim(Claim::Position { agent, from: None, to: c }).unwrap();
        }
        let config = AntConfig::default();
        let me = Cell::new(5, 5);
        world.claim(Claim::Position { agent: 0, from: None, to: me }).unwrap();
        let p = AntProps {
            nest: Cell::new(0, 0),
            ..props(me)
        };
        let ant = lone_ant(p);
        for k in 0..20 {
            let outlook = Outlook {
                world: &world,
                config: &config,
                draw: k as f64 / 20.0,
                safety_first: true,
            };
            let avoid = Behavior(vec![ActionPair::ALL[0], ActionPair::ALL[1]]);
            let to = outlook.predict(&ant, &avoid).cell;
            assert_ne!(to, Cell::new(6, 5));
            assert_ne!(to, me);
        }
    }

    #[test]
    fn food_is_conserved_every_step() {
        let config = AntConfig {
            grid: 20,
            ants: 30,
            source_min_distance: 4,
            units_per_source: 5,
            ..Default::default()
        };
        let mut s = AntsScenario::new(config, 7).unwrap();
        for _ in 0..600 {
            s.step().unwrap();
            assert!(s.conservation_holds());
            assert!(s.world().pheromone_field().iter().all(|p| *p >= 0.0));
        }
        assert!(s.ledger().picked_up > 0);
    }

    #[test]
    fn occupancy_stays_exclusive() {
        let config = AntConfig {
            grid: 12,
            ants: 40,
            source_min_distance: 3,
            ..Default::default()
        };
        let mut s = AntsScenario::new(config, 1).unwrap();
        for _ in 0..200 {
            s.step().unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for a in s.ants() {
                let c = a.properties.cell;
                if c != s.world().nest() {
                    assert!(seen.insert(c));
                    assert_eq!(s.world().occupant(c), Some(a.id));
                }
            }
        }
    }

    #[test]
    fn importance_order_follows_state() {
        let config = AntConfig {
            grid: 20,
            ants: 20,
            source_min_distance: 4,
            ..Default::default()
        };
        let mut s = AntsScenario::new(config, 3).unwrap();
        for _ in 0..300 {
            s.step().unwrap();
            for a in s.ants() {
                let first = a.properties.laden || a.properties.known.is_some();
                assert_eq!(a.order().precedes(SAFETY, EXPLORE), first);
                assert_eq!(a.order().precedes(EXPLORE, SAFETY), !first);
            }
        }
    }
}
