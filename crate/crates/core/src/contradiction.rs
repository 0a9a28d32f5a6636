//! Contradictions, their force dynamics, and the six-part individual built
//! around them.
//!
//! A contradiction is a pair of opposing sides, each with a strictly positive
//! absolute force. Everything an individual does is an action that strengthens
//! or weakens one side; the balance of the two sides (the *sharpness*) is what
//! the metrics layer observes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lowest absolute force a side can be pushed down to.
pub const FORCE_FLOOR: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("contradiction `{0}`: labels must be non-empty and distinct")]
    InvalidLabels(String),
    #[error("contradiction `{id}`: forces must be finite and > 0 (got {pos}, {neg})")]
    NonPositiveForce { id: String, pos: f64, neg: f64 },
    #[error("unknown contradiction `{0}`")]
    UnknownContradiction(String),
    #[error("duplicate contradiction `{0}`")]
    DuplicateContradiction(String),
    #[error("action magnitude must be finite and > 0 (got {0})")]
    InvalidMagnitude(f64),
    #[error("action {kind} on `{id}` rejected: needs {needed} of `{resource}`, claimed {claimed}")]
    InsufficientResources {
        id: String,
        kind: ActionKind,
        resource: String,
        needed: f64,
        claimed: f64,
    },
    #[error("importance order: `{0}` cannot be preferred over itself")]
    ReflexiveOrder(String),
    #[error("importance order: `{0}` over `{1}` would create a cycle")]
    CyclicOrder(String, String),
    #[error("utility returned {0}, outside [0, 1]")]
    UtilityOutOfRange(f64),
    #[error("expected {expected} force deltas, got {got}")]
    DeltaLength { expected: usize, got: usize },
    #[error("property dynamics failed: {0}")]
    Dynamics(String),
}

/// Name plus the labels of the two opposing sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ContradictionId {
    name: String,
    positive: String,
    negative: String,
}

impl ContradictionId {
    pub fn new(
        name: impl Into<String>,
        positive: impl Into<String>,
        negative: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let (name, positive, negative) = (name.into(), positive.into(), negative.into());
        if name.is_empty() || positive.is_empty() || negative.is_empty() || positive == negative {
            return Err(ModelError::InvalidLabels(name));
        }
        Ok(Self {
            name,
            positive,
            negative,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn positive_label(&self) -> &str {
        &self.positive
    }

    pub fn negative_label(&self) -> &str {
        &self.negative
    }
}

impl fmt::Display for ContradictionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}/{})", self.name, self.positive, self.negative)
    }
}

/// A contradiction with the absolute forces of both sides.
///
/// Both forces are always strictly positive; actions can push a side down to
/// [`FORCE_FLOOR`] but never remove it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContradictionState {
    id: ContradictionId,
    force_pos: f64,
    force_neg: f64,
}

/// Signed change applied to the two forces of one contradiction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ForceDelta {
    pub pos: f64,
    pub neg: f64,
}

impl ForceDelta {
    pub const ZERO: ForceDelta = ForceDelta { pos: 0.0, neg: 0.0 };

    pub fn is_zero(&self) -> bool {
        self.pos == 0.0 && self.neg == 0.0
    }
}

impl ContradictionState {
    pub fn new(id: ContradictionId, force_pos: f64, force_neg: f64) -> Result<Self, ModelError> {
        if !(force_pos.is_finite() && force_neg.is_finite() && force_pos > 0.0 && force_neg > 0.0) {
            return Err(ModelError::NonPositiveForce {
                id: id.name.clone(),
                pos: force_pos,
                neg: force_neg,
            });
        }
        Ok(Self {
            id,
            force_pos,
            force_neg,
        })
    }

    /// Builds a state whose sharpness equals `lambda` and whose forces sum to
    /// `total`. `lambda` is pulled inside the open interval so neither side
    /// drops below the floor.
    pub fn from_sharpness(id: ContradictionId, lambda: f64, total: f64) -> Result<Self, ModelError> {
        if !(total.is_finite() && total > 2.0 * FORCE_FLOOR) || !lambda.is_finite() {
            return Err(ModelError::NonPositiveForce {
                id: id.name.clone(),
                pos: lambda,
                neg: total,
            });
        }
        let limit = 1.0 - 2.0 * FORCE_FLOOR / total;
        let lambda = lambda.clamp(-limit, limit);
        let pos = total * (1.0 + lambda) / 2.0;
        let neg = total - pos;
        Self::new(id, pos.max(FORCE_FLOOR), neg.max(FORCE_FLOOR))
    }

    pub fn id(&self) -> &ContradictionId {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.id.name
    }

    pub fn force_pos(&self) -> f64 {
        self.force_pos
    }

    pub fn force_neg(&self) -> f64 {
        self.force_neg
    }

    /// Shares of the total force held by each side; they sum to one.
    pub fn relative_forces(&self) -> (f64, f64) {
        let total = self.force_pos + self.force_neg;
        (self.force_pos / total, self.force_neg / total)
    }

    /// Positive share minus negative share, strictly inside (-1, 1).
    pub fn sharpness(&self) -> f64 {
        let (pos, neg) = self.relative_forces();
        pos - neg
    }

    /// Adds `delta` to the forces, flooring each side at [`FORCE_FLOOR`].
    /// Returns the delta actually realized.
    pub fn apply_delta(&mut self, delta: ForceDelta) -> ForceDelta {
        let pos = (self.force_pos + delta.pos).max(FORCE_FLOOR);
        let neg = (self.force_neg + delta.neg).max(FORCE_FLOOR);
        let realized = ForceDelta {
            pos: pos - self.force_pos,
            neg: neg - self.force_neg,
        };
        self.force_pos = pos;
        self.force_neg = neg;
        realized
    }

    /// Overwrites both forces, e.g. when a scenario derives them from observed state.
    pub fn set_forces(&mut self, force_pos: f64, force_neg: f64) -> Result<(), ModelError> {
        let next = Self::new(self.id.clone(), force_pos, force_neg)?;
        *self = next;
        Ok(())
    }

    /// Re-targets the state to the given sharpness, keeping the current total force.
    pub fn set_sharpness(&mut self, lambda: f64) -> Result<(), ModelError> {
        let total = self.force_pos + self.force_neg;
        let next = Self::from_sharpness(self.id.clone(), lambda, total)?;
        *self = next;
        Ok(())
    }
}

/// Relative forces of a state; see [`ContradictionState::relative_forces`].
pub fn relative_forces(state: &ContradictionState) -> (f64, f64) {
    state.relative_forces()
}

/// Sharpness of a state; see [`ContradictionState::sharpness`].
pub fn sharpness(state: &ContradictionState) -> f64 {
    state.sharpness()
}

/// Which side an action targets and in which direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    StrengthenPos,
    WeakenPos,
    StrengthenNeg,
    WeakenNeg,
}

impl ActionKind {
    pub const ALL: [ActionKind; 4] = [
        ActionKind::StrengthenPos,
        ActionKind::WeakenPos,
        ActionKind::StrengthenNeg,
        ActionKind::WeakenNeg,
    ];

    pub fn delta(self, magnitude: f64) -> ForceDelta {
        match self {
            ActionKind::StrengthenPos => ForceDelta { pos: magnitude, neg: 0.0 },
            ActionKind::WeakenPos => ForceDelta { pos: -magnitude, neg: 0.0 },
            ActionKind::StrengthenNeg => ForceDelta { pos: 0.0, neg: magnitude },
            ActionKind::WeakenNeg => ForceDelta { pos: 0.0, neg: -magnitude },
        }
    }

    pub fn inverse(self) -> ActionKind {
        match self {
            ActionKind::StrengthenPos => ActionKind::WeakenPos,
            ActionKind::WeakenPos => ActionKind::StrengthenPos,
            ActionKind::StrengthenNeg => ActionKind::WeakenNeg,
            ActionKind::WeakenNeg => ActionKind::StrengthenNeg,
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ActionKind::StrengthenPos => "strengthen_pos",
            ActionKind::WeakenPos => "weaken_pos",
            ActionKind::StrengthenNeg => "strengthen_neg",
            ActionKind::WeakenNeg => "weaken_neg",
        };
        f.write_str(s)
    }
}

/// A quantity of a named resource.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceAmount {
    pub resource: String,
    pub quantity: f64,
}

impl ResourceAmount {
    pub fn new(resource: impl Into<String>, quantity: f64) -> Self {
        Self {
            resource: resource.into(),
            quantity,
        }
    }
}

/// One action handle: its kind, the magnitude it applies by default, and the
/// resources it must be able to claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub kind: ActionKind,
    pub magnitude: f64,
    pub needs: Vec<ResourceAmount>,
}

impl ActionSpec {
    pub fn new(kind: ActionKind, magnitude: f64) -> Self {
        Self {
            kind,
            magnitude,
            needs: Vec::new(),
        }
    }

    pub fn needing(mut self, need: ResourceAmount) -> Self {
        self.needs.push(need);
        self
    }

    fn check_claim(&self, id: &str, claimed: &[ResourceAmount]) -> Result<(), ModelError> {
        for need in &self.needs {
            let got: f64 = claimed
                .iter()
                .filter(|c| c.resource == need.resource)
                .map(|c| c.quantity)
                .sum();
            if got < need.quantity {
                return Err(ModelError::InsufficientResources {
                    id: id.to_string(),
                    kind: self.kind,
                    resource: need.resource.clone(),
                    needed: need.quantity,
                    claimed: got,
                });
            }
        }
        Ok(())
    }
}

/// The four actions attached to one contradiction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionQuadruple {
    pub strengthen_pos: ActionSpec,
    pub weaken_pos: ActionSpec,
    pub strengthen_neg: ActionSpec,
    pub weaken_neg: ActionSpec,
}

impl ActionQuadruple {
    /// Four resource-free actions with the same default magnitude.
    pub fn uniform(magnitude: f64) -> Self {
        Self {
            strengthen_pos: ActionSpec::new(ActionKind::StrengthenPos, magnitude),
            weaken_pos: ActionSpec::new(ActionKind::WeakenPos, magnitude),
            strengthen_neg: ActionSpec::new(ActionKind::StrengthenNeg, magnitude),
            weaken_neg: ActionSpec::new(ActionKind::WeakenNeg, magnitude),
        }
    }

    pub fn get(&self, kind: ActionKind) -> &ActionSpec {
        match kind {
            ActionKind::StrengthenPos => &self.strengthen_pos,
            ActionKind::WeakenPos => &self.weaken_pos,
            ActionKind::StrengthenNeg => &self.strengthen_neg,
            ActionKind::WeakenNeg => &self.weaken_neg,
        }
    }

    pub fn get_mut(&mut self, kind: ActionKind) -> &mut ActionSpec {
        match kind {
            ActionKind::StrengthenPos => &mut self.strengthen_pos,
            ActionKind::WeakenPos => &mut self.weaken_pos,
            ActionKind::StrengthenNeg => &mut self.strengthen_neg,
            ActionKind::WeakenNeg => &mut self.weaken_neg,
        }
    }

    fn is_well_formed(&self) -> bool {
        ActionKind::ALL.iter().all(|&k| self.get(k).kind == k)
    }
}

impl Default for ActionQuadruple {
    fn default() -> Self {
        Self::uniform(1.0)
    }
}

/// Strict partial order over contradiction names: `(a, b)` means `a` matters
/// more than `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportanceOrder {
    pairs: BTreeSet<(String, String)>,
}

impl ImportanceOrder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an order from `(more, less)` pairs, rejecting cycles.
    pub fn from_pairs<I, A, B>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut order = Self::new();
        for (a, b) in pairs {
            order.prefer(a, b)?;
        }
        Ok(order)
    }

    /// Chain order: each element outranks all later ones.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Self {
        let mut order = Self::new();
        for w in names.windows(2) {
            order
                .pairs
                .insert((w[0].as_ref().to_string(), w[1].as_ref().to_string()));
        }
        order
    }

    pub fn prefer(&mut self, more: impl Into<String>, less: impl Into<String>) -> Result<(), ModelError> {
        let (more, less) = (more.into(), less.into());
        if more == less {
            return Err(ModelError::ReflexiveOrder(more));
        }
        if self.precedes(&less, &more) {
            return Err(ModelError::CyclicOrder(more, less));
        }
        self.pairs.insert((more, less));
        Ok(())
    }

    /// True when `a` outranks `b` in the transitive closure.
    pub fn precedes(&self, a: &str, b: &str) -> bool {
        let mut stack = vec![a];
        let mut seen = BTreeSet::new();
        while let Some(cur) = stack.pop() {
            for (x, y) in &self.pairs {
                if x == cur {
                    if y == b {
                        return true;
                    }
                    if seen.insert(y.as_str()) {
                        stack.push(y.as_str());
                    }
                }
            }
        }
        false
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn names(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()])
    }

    /// Sorts `names` so that more important contradictions come first; ties
    /// keep their input order.
    pub fn rank<'a>(&self, names: &[&'a str]) -> Vec<&'a str> {
        let mut remaining: Vec<&'a str> = names.to_vec();
        let mut out = Vec::with_capacity(names.len());
        while !remaining.is_empty() {
            let idx = remaining
                .iter()
                .position(|&c| !remaining.iter().any(|&o| o != c && self.precedes(o, c)))
                .unwrap_or(0);
            out.push(remaining.remove(idx));
        }
        out
    }
}

/// A resource an individual needs, with the most it can hold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceNeed {
    pub resource: String,
    pub max_quantity: f64,
}

/// The utility evaluator: maps properties to a score in [0, 1].
pub type Utility<P> = Arc<dyn Fn(&P) -> f64 + Send + Sync>;

/// Scenario-supplied property dynamics `next = f(current, contradictions, order, delta)`.
pub trait PropertyDynamics<P> {
    fn next(
        &self,
        current: &P,
        contradictions: &[ContradictionState],
        order: &ImportanceOrder,
        delta: &[ForceDelta],
    ) -> Result<P, ModelError>;
}

impl<P, F> PropertyDynamics<P> for F
where
    F: Fn(&P, &[ContradictionState], &ImportanceOrder, &[ForceDelta]) -> Result<P, ModelError>,
{
    fn next(
        &self,
        current: &P,
        contradictions: &[ContradictionState],
        order: &ImportanceOrder,
        delta: &[ForceDelta],
    ) -> Result<P, ModelError> {
        self(current, contradictions, order, delta)
    }
}

/// An individual: contradictions, their importance order, resource needs,
/// one action quadruple per contradiction, observable properties, and a utility.
#[derive(Clone)]
pub struct Individual<P> {
    pub id: usize,
    contradictions: Vec<ContradictionState>,
    order: ImportanceOrder,
    resource_needs: Vec<ResourceNeed>,
    actions: Vec<ActionQuadruple>,
    pub properties: P,
    utility: Utility<P>,
}

impl<P: fmt::Debug> fmt::Debug for Individual<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Individual")
            .field("id", &self.id)
            .field("contradictions", &self.contradictions)
            .field("order", &self.order)
            .field("resource_needs", &self.resource_needs)
            .field("properties", &self.properties)
            .finish_non_exhaustive()
    }
}

impl<P> Individual<P> {
    pub fn new(
        id: usize,
        contradictions: Vec<ContradictionState>,
        properties: P,
        utility: Utility<P>,
    ) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for c in &contradictions {
            if !seen.insert(c.name().to_string()) {
                return Err(ModelError::DuplicateContradiction(c.name().to_string()));
            }
        }
        let actions = vec![ActionQuadruple::default(); contradictions.len()];
        Ok(Self {
            id,
            contradictions,
            order: ImportanceOrder::new(),
            resource_needs: Vec::new(),
            actions,
            properties,
            utility,
        })
    }

    pub fn with_order(mut self, order: ImportanceOrder) -> Result<Self, ModelError> {
        self.set_order(order)?;
        Ok(self)
    }

    pub fn with_actions(mut self, contradiction: &str, actions: ActionQuadruple) -> Result<Self, ModelError> {
        if !actions.is_well_formed() {
            return Err(ModelError::UnknownContradiction(format!(
                "{contradiction}: malformed action quadruple"
            )));
        }
        let idx = self.index_of(contradiction)?;
        self.actions[idx] = actions;
        Ok(self)
    }

    pub fn with_needs(mut self, needs: Vec<ResourceNeed>) -> Self {
        self.resource_needs = needs;
        self
    }

    pub fn contradictions(&self) -> &[ContradictionState] {
        &self.contradictions
    }

    pub fn contradiction(&self, name: &str) -> Result<&ContradictionState, ModelError> {
        Ok(&self.contradictions[self.index_of(name)?])
    }

    pub fn contradiction_mut(&mut self, name: &str) -> Result<&mut ContradictionState, ModelError> {
        let idx = self.index_of(name)?;
        Ok(&mut self.contradictions[idx])
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModelError> {
        self.contradictions
            .iter()
            .position(|c| c.name() == name)
            .ok_or_else(|| ModelError::UnknownContradiction(name.to_string()))
    }

    pub fn order(&self) -> &ImportanceOrder {
        &self.order
    }

    /// Replaces the importance order. Every name it mentions must be one of
    /// this individual's contradictions.
    pub fn set_order(&mut self, order: ImportanceOrder) -> Result<(), ModelError> {
        for name in order.names() {
            self.index_of(name)?;
        }
        self.order = order;
        Ok(())
    }

    pub fn resource_needs(&self) -> &[ResourceNeed] {
        &self.resource_needs
    }

    pub fn actions(&self, contradiction: &str) -> Result<&ActionQuadruple, ModelError> {
        Ok(&self.actions[self.index_of(contradiction)?])
    }

    pub fn actions_at(&self, index: usize) -> &ActionQuadruple {
        &self.actions[index]
    }

    pub fn sharpness_vector(&self) -> Vec<f64> {
        self.contradictions.iter().map(|c| c.sharpness()).collect()
    }

    /// Utility of the given properties, checked to lie in [0, 1].
    pub fn utility_of(&self, properties: &P) -> Result<f64, ModelError> {
        let u = (self.utility)(properties);
        if !(0.0..=1.0).contains(&u) {
            return Err(ModelError::UtilityOutOfRange(u));
        }
        Ok(u)
    }

    pub fn utility(&self) -> Result<f64, ModelError> {
        self.utility_of(&self.properties)
    }

    /// Performs one action: checks the claimed resources against the action's
    /// needs and moves the targeted force by `magnitude`. A rejected action
    /// leaves the individual untouched.
    pub fn apply_action(
        &mut self,
        contradiction: &str,
        kind: ActionKind,
        claimed: &[ResourceAmount],
        magnitude: f64,
    ) -> Result<ForceDelta, ModelError> {
        if !(magnitude.is_finite() && magnitude > 0.0) {
            return Err(ModelError::InvalidMagnitude(magnitude));
        }
        let idx = self.index_of(contradiction)?;
        self.actions[idx].get(kind).check_claim(contradiction, claimed)?;
        Ok(self.contradictions[idx].apply_delta(kind.delta(magnitude)))
    }

    /// Advances the properties with scenario dynamics given this step's force changes.
    pub fn step_properties<D: PropertyDynamics<P> + ?Sized>(
        &mut self,
        dynamics: &D,
        delta: &[ForceDelta],
    ) -> Result<(), ModelError> {
        if delta.len() != self.contradictions.len() {
            return Err(ModelError::DeltaLength {
                expected: self.contradictions.len(),
                got: delta.len(),
            });
        }
        let next = dynamics.next(&self.properties, &self.contradictions, &self.order, delta)?;
        self.properties = next;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cid(name: &str) -> ContradictionId {
        ContradictionId::new(name, "pos", "neg").unwrap()
    }

    fn state(p: f64, n: f64) -> ContradictionState {
        ContradictionState::new(cid("c"), p, n).unwrap()
    }

    fn agent(p: f64, n: f64) -> Individual<f64> {
        Individual::new(0, vec![state(p, n)], 0.0, Arc::new(|x: &f64| *x)).unwrap()
    }

    #[test]
    fn relative_forces_examples() {
        assert_eq!(state(3.0, 1.0).relative_forces(), (0.75, 0.25));
        assert_eq!(state(2.0, 2.0).relative_forces(), (0.5, 0.5));
        let (p, n) = state(1e-6, 1.0).relative_forces();
        assert!((p - 1e-6).abs() < 1e-11);
        assert!((n - 1.0).abs() < 1e-5);
        assert!((p + n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharpness_examples() {
        assert_eq!(state(3.0, 1.0).sharpness(), 0.5);
        assert_eq!(state(2.0, 2.0).sharpness(), 0.0);
        assert!((state(1.0, 4.0).sharpness() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_force_is_a_model_violation() {
        assert!(matches!(
            ContradictionState::new(cid("c"), 0.0, 1.0),
            Err(ModelError::NonPositiveForce { .. })
        ));
        assert!(ContradictionState::new(cid("c"), 1.0, -2.0).is_err());
        assert!(ContradictionState::new(cid("c"), f64::NAN, 1.0).is_err());
    }

    #[test]
    fn labels_must_differ() {
        assert!(ContradictionId::new("c", "a", "a").is_err());
        assert!(ContradictionId::new("c", "", "b").is_err());
        assert!(ContradictionId::new("", "a", "b").is_err());
    }

    #[test]
    fn from_sharpness_round_trips_and_clamps() {
        let s = ContradictionState::from_sharpness(cid("c"), -0.3, 2.0).unwrap();
        assert!((s.sharpness() + 0.3).abs() < 1e-12);
        let s = ContradictionState::from_sharpness(cid("c"), 1.0, 2.0).unwrap();
        assert!(s.sharpness() < 1.0);
        assert!(s.force_neg() >= FORCE_FLOOR);
    }

    #[test]
    fn strengthen_pos_moves_sharpness() {
        let mut a = agent(3.0, 1.0);
        a.apply_action("c", ActionKind::StrengthenPos, &[], 1.0).unwrap();
        let s = a.contradiction("c").unwrap();
        assert_eq!((s.force_pos(), s.force_neg()), (4.0, 1.0));
        assert!((s.sharpness() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn weaken_is_floored() {
        let mut a = agent(3.0, 1.0);
        a.apply_action("c", ActionKind::WeakenNeg, &[], 0.5).unwrap();
        assert_eq!(a.contradiction("c").unwrap().force_neg(), 0.5);
        a.apply_action("c", ActionKind::WeakenNeg, &[], 0.5).unwrap();
        assert_eq!(a.contradiction("c").unwrap().force_neg(), FORCE_FLOOR);
    }

    #[test]
    fn rejected_claim_leaves_state_untouched() {
        let quad = {
            let mut q = ActionQuadruple::uniform(1.0);
            q.strengthen_pos = q
                .strengthen_pos
                .clone()
                .needing(ResourceAmount::new("food", 1.0));
            q
        };
        let mut a = agent(3.0, 1.0).with_actions("c", quad).unwrap();
        let before = a.contradictions().to_vec();
        let err = a
            .apply_action("c", ActionKind::StrengthenPos, &[ResourceAmount::new("food", 0.5)], 1.0)
            .unwrap_err();
        assert!(matches!(err, ModelError::InsufficientResources { .. }));
        assert_eq!(a.contradictions(), &before[..]);
        a.apply_action("c", ActionKind::StrengthenPos, &[ResourceAmount::new("food", 1.0)], 1.0)
            .unwrap();
        assert_eq!(a.contradiction("c").unwrap().force_pos(), 4.0);
    }

    #[test]
    fn unknown_contradiction_and_bad_magnitude() {
        let mut a = agent(1.0, 1.0);
        assert!(matches!(
            a.apply_action("zz", ActionKind::WeakenPos, &[], 1.0),
            Err(ModelError::UnknownContradiction(_))
        ));
        assert!(matches!(
            a.apply_action("c", ActionKind::WeakenPos, &[], 0.0),
            Err(ModelError::InvalidMagnitude(_))
        ));
    }

    #[test]
    fn importance_order_rejects_cycles() {
        let mut o = ImportanceOrder::new();
        o.prefer("a", "b").unwrap();
        o.prefer("b", "c").unwrap();
        assert!(o.precedes("a", "c"));
        assert!(matches!(o.prefer("c", "a"), Err(ModelError::CyclicOrder(..))));
        assert!(matches!(o.prefer("a", "a"), Err(ModelError::ReflexiveOrder(_))));
        assert_eq!(o.rank(&["c", "b", "a"]), vec!["a", "b", "c"]);
    }

    #[test]
    fn order_must_reference_known_contradictions() {
        let mut a = agent(1.0, 1.0);
        let order = ImportanceOrder::from_pairs([("c", "missing")]).unwrap();
        assert!(a.set_order(order).is_err());
    }

    #[test]
    fn utility_range_is_enforced() {
        let mut a = agent(1.0, 1.0);
        a.properties = 1.5;
        assert!(matches!(a.utility(), Err(ModelError::UtilityOutOfRange(_))));
        a.properties = 0.25;
        assert_eq!(a.utility().unwrap(), 0.25);
    }

    #[test]
    fn identity_dynamics_on_zero_delta() {
        let mut a = agent(1.0, 2.0);
        a.properties = 0.4;
        let f = |p: &f64, _: &[ContradictionState], _: &ImportanceOrder, d: &[ForceDelta]| {
            Ok(p + d.iter().map(|x| x.pos - x.neg).sum::<f64>())
        };
        a.step_properties(&f, &[ForceDelta::ZERO]).unwrap();
        assert_eq!(a.properties, 0.4);
        a.step_properties(&f, &[ForceDelta { pos: 0.1, neg: 0.0 }]).unwrap();
        assert!((a.properties - 0.5).abs() < 1e-15);
        assert!(a.step_properties(&f, &[]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn forces_never_drop_below_floor(
                p in 1e-6f64..100.0, n in 1e-6f64..100.0,
                steps in prop::collection::vec((0usize..4, 1e-3f64..50.0), 0..40)
            ) {
                let mut a = agent(p, n);
                for (k, m) in steps {
                    a.apply_action("c", ActionKind::ALL[k], &[], m).unwrap();
                    let s = a.contradiction("c").unwrap();
                    prop_assert!(s.force_pos() >= FORCE_FLOOR && s.force_neg() >= FORCE_FLOOR);
                    prop_assert!(s.sharpness().abs() < 1.0);
                }
            }

            #[test]
            fn sharpness_is_share_difference(p in 1e-6f64..1e6, n in 1e-6f64..1e6) {
                let s = state(p, n);
                let (a, b) = s.relative_forces();
                prop_assert_eq!(s.sharpness(), a - b);
                prop_assert!((a + b - 1.0).abs() < 1e-12);
            }

            #[test]
            fn inverse_action_restores(p in 1.0f64..100.0, n in 1.0f64..100.0, k in 0usize..4, m in 0.01f64..0.9) {
                let mut a = agent(p, n);
                let kind = ActionKind::ALL[k];
                a.apply_action("c", kind, &[], m).unwrap();
                a.apply_action("c", kind.inverse(), &[], m).unwrap();
                let s = a.contradiction("c").unwrap();
                prop_assert!((s.force_pos() - p).abs() < 1e-12);
                prop_assert!((s.force_neg() - n).abs() < 1e-12);
            }

            #[test]
            fn strengthening_raises_share(p in 1e-3f64..100.0, n in 1e-3f64..100.0, m in 1e-3f64..10.0) {
                let mut a = agent(p, n);
                let before = a.contradiction("c").unwrap().relative_forces();
                a.apply_action("c", ActionKind::StrengthenPos, &[], m).unwrap();
                prop_assert!(a.contradiction("c").unwrap().relative_forces().0 > before.0);
                let mut b = agent(p, n);
                b.apply_action("c", ActionKind::StrengthenNeg, &[], m).unwrap();
                prop_assert!(b.contradiction("c").unwrap().relative_forces().1 > before.1);
            }
        }
    }
}
