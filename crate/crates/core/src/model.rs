//! The abstract interface shared by the classical and Hilbert space models.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{Error, Result};

/// An effect algebra together with its substates and operations, realized as
/// concrete data.
///
/// Substates are additive `[0,1]`-valued functionals on effects. Operations act
/// linearly on substates, which realizes convexity, and map substates to
/// substates. In both models the states are separating, so every operation
/// measures a unique effect.
pub trait Model {
    type Effect: Clone + Debug;
    type Substate: Clone + Debug;
    type Operation: Clone + Debug;

    fn effect_dim(a: &Self::Effect) -> usize;
    fn substate_dim(s: &Self::Substate) -> usize;
    fn operation_dim(op: &Self::Operation) -> usize;

    /// The effect that always occurs.
    fn unit(dim: usize) -> Self::Effect;

    /// `s(a)`, the probability that `a` occurs in `s`.
    fn eval(s: &Self::Substate, a: &Self::Effect) -> Result<f64>;

    /// `s(1)`.
    fn total(s: &Self::Substate) -> f64;

    fn apply(op: &Self::Operation, s: &Self::Substate) -> Result<Self::Substate>;

    /// `first ∘ second`: apply `second`, then `first`.
    fn compose(first: &Self::Operation, second: &Self::Operation) -> Result<Self::Operation>;

    /// The unique effect `Ĵ` with `s(Ĵ) = J(s)(1)` for all states `s`.
    fn measured_effect(op: &Self::Operation) -> Self::Effect;

    /// `Σ λᵢ sᵢ`. Callers keep `Σ λᵢ <= 1` so the result is a substate.
    fn combine(terms: &[(f64, &Self::Substate)]) -> Result<Self::Substate>;

    /// Largest entrywise difference between two substates.
    fn distance(a: &Self::Substate, b: &Self::Substate) -> Result<f64>;

    /// Largest entrywise deviation of `Σ effects` from the unit effect.
    fn unit_deviation(effects: &[&Self::Effect]) -> Result<f64>;

    /// Largest entrywise deviation between `J ∘ J` and `J`.
    fn repeatability_deviation(op: &Self::Operation) -> Result<f64>;

    fn scale(s: &Self::Substate, factor: f64) -> Result<Self::Substate> {
        Self::combine(&[(factor, s)])
    }

    /// `s / s(1)`.
    fn normalize(s: &Self::Substate, tol: f64) -> Result<Self::Substate> {
        let t = Self::total(s);
        if t < tol {
            return Err(Error::NormalizationOfZero);
        }
        Self::scale(s, 1.0 / t)
    }

    fn channel_deviation(op: &Self::Operation) -> Result<f64> {
        Self::unit_deviation(&[&Self::measured_effect(op)])
    }

    fn is_channel(op: &Self::Operation, tol: f64) -> Result<bool> {
        Ok(Self::channel_deviation(op)? <= tol)
    }

    fn is_repeatable(op: &Self::Operation, tol: f64) -> Result<bool> {
        Ok(Self::repeatability_deviation(op)? <= tol)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A finite family of effects summing to the unit, indexed by outcome label.
/// Labels are kept in sorted order.
#[derive(Debug, Clone)]
pub struct Observable<M: Model> {
    dim: usize,
    effects: BTreeMap<String, M::Effect>,
}

impl<M: Model> Observable<M> {
    pub fn new(effects: BTreeMap<String, M::Effect>, tol: f64) -> Result<Self> {
        let dim = effects
            .values()
            .next()
            .map(M::effect_dim)
            .ok_or_else(|| Error::InvalidObservable("no outcomes".into()))?;
        for e in effects.values() {
            check_dim(dim, M::effect_dim(e))?;
        }
        let refs: Vec<&M::Effect> = effects.values().collect();
        let dev = M::unit_deviation(&refs)?;
        if dev > tol {
            return Err(Error::InvalidObservable(format!(
                "effects miss the unit by {dev:.3e}"
            )));
        }
        Ok(Self { dim, effects })
    }

    /// The single-outcome observable `{1}`.
    pub fn trivial(dim: usize, label: impl Into<String>) -> Self {
        Self {
            dim,
            effects: BTreeMap::from([(label.into(), M::unit(dim))]),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.effects.keys().cloned().collect()
    }

    pub fn effect(&self, label: &str) -> Option<&M::Effect> {
        self.effects.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &M::Effect)> {
        self.effects.iter()
    }
}

/// A finite family of operations whose sum is a channel, indexed by outcome
/// label. Labels are kept in sorted order.
#[derive(Debug, Clone)]
pub struct Instrument<M: Model> {
    dim: usize,
    operations: BTreeMap<String, M::Operation>,
}

impl<M: Model> Instrument<M> {
    pub fn new(operations: BTreeMap<String, M::Operation>, tol: f64) -> Result<Self> {
        let dim = operations
            .values()
            .next()
            .map(M::operation_dim)
            .ok_or_else(|| Error::InvalidInstrument("no outcomes".into()))?;
        for op in operations.values() {
            check_dim(dim, M::operation_dim(op))?;
        }
        // Σ I_x is a channel iff its measured effect Σ Î_x is the unit
        let measured: Vec<M::Effect> = operations.values().map(M::measured_effect).collect();
        let refs: Vec<&M::Effect> = measured.iter().collect();
        let dev = M::unit_deviation(&refs)?;
        if dev > tol {
            return Err(Error::InvalidInstrument(format!(
                "measured effects of the operations miss the unit by {dev:.3e}"
            )));
        }
        Ok(Self { dim, operations })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operations.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.operations.keys().cloned().collect()
    }

    pub fn operation(&self, label: &str) -> Option<&M::Operation> {
        self.operations.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &M::Operation)> {
        self.operations.iter()
    }

    /// `Ī(s) = Σ_x I_x(s)`.
    pub fn apply_sum(&self, s: &M::Substate) -> Result<M::Substate> {
        let parts: Vec<M::Substate> = self
            .operations
            .values()
            .map(|op| M::apply(op, s))
            .collect::<Result<_>>()?;
        let terms: Vec<(f64, &M::Substate)> = parts.iter().map(|p| (1.0, p)).collect();
        M::combine(&terms)
    }

    /// The observable this instrument measures: `x ↦ Î_x`.
    pub fn measured_observable(&self, tol: f64) -> Result<Observable<M>> {
        let effects = self
            .operations
            .iter()
            .map(|(k, op)| (k.clone(), M::measured_effect(op)))
            .collect();
        Observable::new(effects, tol)
    }
}
