//! Contradiction-driven swarm simulation.
//!
//! Agents carry *contradictions*: pairs of opposing forces whose balance is
//! summarized by a sharpness value in (-1, 1). Each contradiction plays an
//! internal 2x2 game between its two sides, and agents pick behaviors that
//! respect those equilibria, the resources they can claim, and the pull of
//! the surrounding crowd. Entropy of the sharpness distribution measures how
//! ordered the swarm has become.

pub mod behavior;
pub mod contradiction;
pub mod environment;
pub mod game;
pub mod metrics;
pub mod runner;
pub mod scenarios;

pub use behavior::{
    select_in_swarm, select_isolated, select_with_potential, ActionPair, Behavior, BehaviorError,
    BehaviorOutlook, InteractionContext, PotentialPolicy, ResourceClaim, Selection,
};
pub use contradiction::{
    ActionKind, ActionQuadruple, ContradictionId, ContradictionState, ImportanceOrder, Individual,
    ModelError,
};
pub use game::{Game2x2, StrategyChoice};
pub use metrics::{BinnedDistribution, MetricsError, SwarmSnapshot};
