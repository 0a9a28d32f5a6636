//! Worlds agents live in: a grid with exclusive cells, food stocks and a
//! pheromone field, and an open plane for flocks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behavior::InteractionContext;

/// Pheromone below this level has fully evaporated.
pub const PHEROMONE_FLOOR: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("grid must be at least 1x1, got {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("cell ({x}, {y}) is outside the grid")]
    OutOfBounds { x: i64, y: i64 },
    #[error("cell ({x}, {y}) is held by agent {holder}")]
    Occupied { x: usize, y: usize, holder: usize },
    #[error("agent {0} is not at the cell it is moving from")]
    NotHolder(usize),
    #[error("cell ({x}, {y}) holds {stock} food, {requested} requested")]
    InsufficientFood { x: usize, y: usize, stock: u32, requested: u32 },
    #[error("claimed quantity must be positive")]
    NonPositiveQuantity,
    #[error("pheromone amount must be non-negative, got {0}")]
    NegativeAmount(f64),
    #[error("evaporation rate must lie in [0, 1), got {0}")]
    InvalidRate(f64),
    #[error("resource `{0}` has no quantity left but is not consumable")]
    EmptyResource(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceKind {
    Material,
    Energy,
    Information,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Finite(f64),
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Access {
    Shared,
    Exclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lifecycle {
    Consumable,
    Renewable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceSpec {
    pub name: String,
    pub kind: ResourceKind,
    pub quantity: Quantity,
    pub access: Access,
    pub lifecycle: Lifecycle,
}

impl ResourceSpec {
    pub fn validate(&self) -> Result<(), EnvError> {
        match self.quantity {
            Quantity::Finite(q) if q <= 0.0 && self.lifecycle != Lifecycle::Consumable => {
                Err(EnvError::EmptyResource(self.name.clone()))
            }
            _ => Ok(()),
        }
    }
}

/// Resources of the foraging world: the grid itself, the nest, the food and
/// the pheromone.
pub fn ant_resources(grid: usize, sources: usize, units_per_source: u32) -> Vec<ResourceSpec> {
    let spec = |name: &str, kind, quantity, access, lifecycle| ResourceSpec {
        name: name.to_string(),
        kind,
        quantity,
        access,
        lifecycle,
    };
    vec![
        spec(
            "position",
            ResourceKind::Material,
            Quantity::Finite((grid * grid) as f64),
            Access::Exclusive,
            Lifecycle::Renewable,
        ),
        spec("nest", ResourceKind::Material, Quantity::Finite(1.0), Access::Shared, Lifecycle::Renewable),
        spec(
            "food",
            ResourceKind::Material,
            Quantity::Finite(sources as f64 * units_per_source as f64),
            Access::Exclusive,
            Lifecycle::Consumable,
        ),
        spec("pheromone", ResourceKind::Information, Quantity::Unbounded, Access::Shared, Lifecycle::Consumable),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    /// Steps between two cells when diagonal moves are allowed.
    pub fn chebyshev(self, other: Cell) -> usize {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Claim {
    /// Take an exclusive cell, releasing `from` if given.
    Position { agent: usize, from: Option<Cell>, to: Cell },
    Food { cell: Cell, quantity: u32 },
    SensePheromone { cell: Cell },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Granted {
    Position,
    Food { remaining: u32 },
    Pheromone(f64),
}

/// Square-cell world. Every cell but the nest holds at most one agent; the
/// nest is an unlimited shared sink.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridWorld {
    width: usize,
    height: usize,
    nest: Cell,
    occupant: Vec<Option<usize>>,
    food: Vec<u32>,
    pheromone: Vec<f64>,
}

impl GridWorld {
    pub fn new(width: usize, height: usize, nest: Cell) -> Result<Self, EnvError> {
        if width == 0 || height == 0 {
            return Err(EnvError::InvalidDimensions { width, height });
        }
        let cells = width * height;
        let world = Self {
            width,
            height,
            nest,
            occupant: vec![None; cells],
            food: vec![0; cells],
            pheromone: vec![0.0; cells],
        };
        world.check(nest)?;
        Ok(world)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn nest(&self) -> Cell {
        self.nest
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    fn check(&self, cell: Cell) -> Result<usize, EnvError> {
        if cell.x < self.width && cell.y < self.height {
            Ok(cell.y * self.width + cell.x)
        } else {
            Err(EnvError::OutOfBounds {
                x: cell.x as i64,
                y: cell.y as i64,
            })
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| Cell::new(x, y)))
    }

    /// Moore neighbors within `radius`, row-major, excluding `cell` itself.
    pub fn neighbors(&self, cell: Cell, radius: usize) -> Vec<Cell> {
        let r = radius as i64;
        let mut out = Vec::with_capacity(((2 * radius + 1).pow(2)).saturating_sub(1));
        for dy in -r..=r {
            for dx in -r..=r {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (x, y) = (cell.x as i64 + dx, cell.y as i64 + dy);
                if self.contains(x, y) {
                    out.push(Cell::new(x as usize, y as usize));
                }
            }
        }
        out
    }

    pub fn occupant(&self, cell: Cell) -> Option<usize> {
        self.check(cell).ok().and_then(|i| self.occupant[i])
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        cell == self.nest || self.occupant(cell).is_none()
    }

    pub fn food_at(&self, cell: Cell) -> u32 {
        self.check(cell).map(|i| self.food[i]).unwrap_or(0)
    }

    pub fn set_food(&mut self, cell: Cell, units: u32) -> Result<(), EnvError> {
        let i = self.check(cell)?;
        self.food[i] = units;
        Ok(())
    }

    pub fn total_food(&self) -> u64 {
        self.food.iter().map(|&f| f as u64).sum()
    }

    pub fn pheromone_at(&self, cell: Cell) -> f64 {
        self.check(cell).map(|i| self.pheromone[i]).unwrap_or(0.0)
    }

    pub fn pheromone_field(&self) -> &[f64] {
        &self.pheromone
    }

    /// Grants a claim or fails without touching the world.
    pub fn claim(&mut self, claim: Claim) -> Result<Granted, EnvError> {
        match claim {
            Claim::Position { agent, from, to } => {
                let ti = self.check(to)?;
                if let Some(from) = from {
                    let fi = self.check(from)?;
                    if from != self.nest && self.occupant[fi] != Some(agent) {
                        return Err(EnvError::NotHolder(agent));
                    }
                }
                if to != self.nest {
                    if let Some(holder) = self.occupant[ti] {
                        if holder != agent {
                            return Err(EnvError::Occupied { x: to.x, y: to.y, holder });
                        }
                    }
                }
                if let Some(from) = from {
                    if from != self.nest {
                        let fi = self.check(from)?;
                        self.occupant[fi] = None;
                    }
                }
                if to != self.nest {
                    self.occupant[ti] = Some(agent);
                }
                Ok(Granted::Position)
            }
            Claim::Food { cell, quantity } => {
                if quantity == 0 {
                    return Err(EnvError::NonPositiveQuantity);
                }
                let i = self.check(cell)?;
                if self.food[i] < quantity {
                    return Err(EnvError::InsufficientFood {
                        x: cell.x,
                        y: cell.y,
                        stock: self.food[i],
                        requested: quantity,
                    });
                }
                self.food[i] -= quantity;
                Ok(Granted::Food { remaining: self.food[i] })
            }
            Claim::SensePheromone { cell } => Ok(Granted::Pheromone(self.pheromone[self.check(cell)?])),
        }
    }

    pub fn deposit_pheromone(&mut self, cell: Cell, amount: f64) -> Result<(), EnvError> {
        if amount.is_nan() || amount < 0.0 {
            return Err(EnvError::NegativeAmount(amount));
        }
        let i = self.check(cell)?;
        self.pheromone[i] += amount;
        Ok(())
    }

    pub fn evaporate(&mut self, rate: f64) -> Result<(), EnvError> {
        if !(0.0..1.0).contains(&rate) {
            return Err(EnvError::InvalidRate(rate));
        }
        for p in &mut self.pheromone {
            *p *= 1.0 - rate;
            if *p < PHEROMONE_FLOOR {
                *p = 0.0;
            }
        }
        Ok(())
    }

    /// Read-only view of everything within `radius` of `center`.
    pub fn neighborhood(&self, center: Cell, radius: usize) -> NeighborhoodView {
        let mut view = NeighborhoodView {
            center,
            radius,
            agents: Vec::new(),
            free_cells: Vec::new(),
            food: Vec::new(),
            pheromone: Vec::new(),
            cell_count: 0,
        };
        for cell in self.neighbors(center, radius) {
            view.cell_count += 1;
            match self.occupant(cell) {
                Some(a) if cell != self.nest => view.agents.push((a, cell)),
                _ => view.free_cells.push(cell),
            }
            let f = self.food_at(cell);
            if f > 0 {
                view.food.push((cell, f));
            }
            let p = self.pheromone_at(cell);
            if p > 0.0 {
                view.pheromone.push((cell, p));
            }
        }
        view
    }
}

/// What an agent at `center` can see. Agents are listed without the
/// center's own occupant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodView {
    pub center: Cell,
    pub radius: usize,
    pub agents: Vec<(usize, Cell)>,
    pub free_cells: Vec<Cell>,
    pub food: Vec<(Cell, u32)>,
    pub pheromone: Vec<(Cell, f64)>,
    pub cell_count: usize,
}

impl NeighborhoodView {
    /// Share of neighbor cells held by other agents.
    pub fn crowding(&self) -> f64 {
        if self.cell_count == 0 {
            0.0
        } else {
            self.agents.len() as f64 / self.cell_count as f64
        }
    }
}

/// Which contradiction each kind of contact acts on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionRules {
    /// Focal contradiction when agents compete for neighboring positions.
    pub position: String,
    /// Focal contradiction when agents share pheromone.
    pub pheromone: String,
}

/// One context per contact kind present in the view. `sharpness(agent, c)`
/// reports an agent's current sharpness on contradiction `c`.
pub fn build_interactions<F>(
    view: &NeighborhoodView,
    center: usize,
    rules: &InteractionRules,
    sharpness: F,
) -> Vec<InteractionContext>
where
    F: Fn(usize, &str) -> f64,
{
    let mut participants = vec![center];
    participants.extend(view.agents.iter().map(|(a, _)| *a));
    let context = |focal: &str, resource: &str, pressure: f64| InteractionContext {
        center,
        focal: focal.to_string(),
        participants: participants.clone(),
        contested: vec![resource.to_string()],
        pressure,
        sharpness: participants.iter().map(|&a| sharpness(a, focal)).collect(),
    };
    let mut out = Vec::new();
    if !view.agents.is_empty() {
        out.push(context(&rules.position, "position", view.crowding()));
    }
    if !view.pheromone.is_empty() {
        out.push(context(&rules.pheromone, "pheromone", 0.0));
    }
    out
}

/// Open plane holding point agents.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ContinuousWorld {
    pub positions: Vec<[f64; 2]>,
}

impl ContinuousWorld {
    pub fn new(positions: Vec<[f64; 2]>) -> Self {
        Self { positions }
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.positions[a], self.positions[b]);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    /// Other agents within Euclidean `radius`, nearest first.
    pub fn within(&self, agent: usize, radius: f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = (0..self.positions.len())
            .filter(|&b| b != agent)
            .map(|b| (b, self.distance(agent, b)))
            .filter(|&(_, d)| d <= radius)
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }
}
