//! The finite classical effect algebra on `n` outcomes.
//!
//! Effects are vectors in `[0,1]^n` with `a ⊕ b = a + b` defined when the sum
//! stays below the unit. Substates are nonnegative weight vectors with total at
//! most 1 and act on effects by `s(a) = Σ wᵢaᵢ`. Operations are nonnegative
//! `n × n` matrices with column sums at most 1 acting on weights by
//! multiplication; channels are exactly the column-stochastic ones.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{check_dim, Instrument, Model, Observable};

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} has non-finite entries"
        )))
    }
}

fn check_nonempty(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::UnsupportedDimension(0))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEffect {
    values: Vec<f64>,
}

impl ClassicalEffect {
    /// Entries outside `[-tol, 1 + tol]` are rejected, never clamped.
    pub fn new(values: Vec<f64>, tol: f64) -> Result<Self> {
        check_nonempty(values.len())?;
        check_finite(&values, "effect")?;
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v < -tol || v > 1.0 + tol)
        {
            return Err(Error::InvalidEffect(format!(
                "entry {i} = {v} lies outside [0,1]"
            )));
        }
        Ok(Self { values })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
        }
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            values: vec![1.0; dim],
        }
    }

    /// The point mass `δᵢ`, the effect "outcome `i` occurred".
    pub fn point(dim: usize, i: usize) -> Self {
        let mut values = vec![0.0; dim];
        values[i] = 1.0;
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `a' = 1 − a`, the unique effect with `a ⊕ a' = 1`.
    pub fn complement(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| 1.0 - v).collect(),
        }
    }

    /// `a ⊕ b`. `Ok(None)` means the sum is undefined, which is part of the
    /// algebra and not an error.
    pub fn oplus(&self, other: &Self, tol: f64) -> Result<Option<Self>> {
        check_dim(self.dim(), other.dim())?;
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        if values.iter().any(|&v| v > 1.0 + tol) {
            return Ok(None);
        }
        Ok(Some(Self { values }))
    }

    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(max_abs_diff(&self.values, &other.values))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSubstate {
    weights: Vec<f64>,
}

impl ClassicalSubstate {
    pub fn new(weights: Vec<f64>, tol: f64) -> Result<Self> {
        check_nonempty(weights.len())?;
        check_finite(&weights, "substate")?;
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, &w)| w < -tol) {
            return Err(Error::InvalidSubstate(format!(
                "weight {i} = {w} is negative"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + tol {
            return Err(Error::InvalidSubstate(format!(
                "total weight {total} exceeds 1"
            )));
        }
        Ok(Self { weights })
    }

    /// A substate with total weight 1.
    pub fn state(weights: Vec<f64>, tol: f64) -> Result<Self> {
        let s = Self::new(weights, tol)?;
        if !s.is_state(tol) {
            return Err(Error::InvalidSubstate(format!(
                "total weight {} is not 1",
                s.total()
            )));
        }
        Ok(s)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            weights: vec![0.0; dim],
        }
    }

    pub fn point(dim: usize, i: usize) -> Self {
        let mut weights = vec![0.0; dim];
        weights[i] = 1.0;
        Self { weights }
    }

    pub fn uniform(dim: usize) -> Self {
        Self {
            weights: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `s(1)`.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_state(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
    }

    /// `s(a) = Σ wᵢaᵢ`.
    pub fn eval(&self, a: &ClassicalEffect) -> Result<f64> {
        check_dim(self.dim(), a.dim())?;
        Ok(self.weights.iter().zip(&a.values).map(|(w, v)| w * v).sum())
    }

    /// `s / s(1)`.
    pub fn normalize(&self, tol: f64) -> Result<Self> {
        let t = self.total();
        if t < tol {
            return Err(Error::NormalizationOfZero);
        }
        Ok(Self {
            weights: self.weights.iter().map(|w| w / t).collect(),
        })
    }
}

/// A column-substochastic matrix, stored row-major. Column `j` is the image of
/// the point mass at `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOperation {
    dim: usize,
    matrix: Vec<f64>,
}

impl ClassicalOperation {
    pub fn new(rows: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let dim = rows.len();
        check_nonempty(dim)?;
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::InvalidOperation(format!(
                "matrix is not square: row of length {} in a {dim}-row matrix",
                r.len()
            )));
        }
        let matrix: Vec<f64> = rows.into_iter().flatten().collect();
        check_finite(&matrix, "operation")?;
        if let Some(v) = matrix.iter().find(|&&v| v < -tol) {
            return Err(Error::InvalidOperation(format!("negative entry {v}")));
        }
        let op = Self { dim, matrix };
        let sums = op.column_sums();
        if let Some((j, s)) = sums.iter().enumerate().find(|(_, &s)| s > 1.0 + tol) {
            return Err(Error::InvalidOperation(format!(
                "column {j} sums to {s} > 1"
            )));
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1.0;
        }
        Self { dim, matrix }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            matrix: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.entry(i, j)).sum())
            .collect()
    }

    pub fn apply(&self, s: &ClassicalSubstate) -> Result<ClassicalSubstate> {
        check_dim(self.dim, s.dim())?;
        let weights = self
            .matrix
            .chunks(self.dim)
            .map(|row| row.iter().zip(&s.weights).map(|(m, w)| m * w).sum())
            .collect();
        Ok(ClassicalSubstate { weights })
    }

    /// `self ∘ other`, the matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.matrix[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    matrix[i * n + j] += a * other.matrix[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, matrix })
    }

    /// Entrywise sum; used for `Ī = Σ I_x`. The result is validated.
    pub fn sum<'a>(ops: impl IntoIterator<Item = &'a Self>, tol: f64) -> Result<Self> {
        let mut iter = ops.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidOperation("empty sum".into()))?;
        let mut matrix = first.matrix.clone();
        for op in iter {
            check_dim(first.dim, op.dim)?;
            for (m, v) in matrix.iter_mut().zip(&op.matrix) {
                *m += v;
            }
        }
        let rows = matrix.chunks(first.dim).map(<[f64]>::to_vec).collect();
        Self::new(rows, tol)
    }

    /// `Ĵ`: the vector of column sums, so that `s(Ĵ) = J(s)(1)`.
    pub fn measured_effect(&self) -> ClassicalEffect {
        ClassicalEffect {
            values: self.column_sums(),
        }
    }

    pub fn is_channel(&self, tol: f64) -> bool {
        self.column_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    /// `max |(J∘J) − J|` over matrix entries. By linearity, matrix equality is
    /// equivalent to `J(J(s)) = J(s)` for every substate.
    pub fn repeatability_deviation(&self) -> f64 {
        let twice = self.compose(self).expect("same dimension");
        max_abs_diff(&twice.matrix, &self.matrix)
    }

    pub fn is_repeatable(&self, tol: f64) -> bool {
        self.repeatability_deviation() <= tol
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The pure Holevo operation `H^{(a,α)}(s) = s(a)·α`: matrix `α · aᵀ`.
pub fn holevo_pure(
    a: &ClassicalEffect,
    alpha: &ClassicalSubstate,
    tol: f64,
) -> Result<ClassicalOperation> {
    check_dim(a.dim(), alpha.dim())?;
    if !alpha.is_state(tol) {
        return Err(Error::InvalidSubstate(format!(
            "Holevo target must be a state, total weight is {}",
            alpha.total()
        )));
    }
    let n = a.dim();
    let mut matrix = Vec::with_capacity(n * n);
    for i in 0..n {
        matrix.extend(a.values.iter().map(|v| alpha.weights[i] * v));
    }
    Ok(ClassicalOperation { dim: n, matrix })
}

fn check_labels<T, U>(
    observable: &BTreeMap<String, T>,
    alphas: &BTreeMap<String, U>,
) -> Result<()> {
    if observable.keys().eq(alphas.keys()) {
        Ok(())
    } else {
        Err(Error::OutcomeMismatch(format!(
            "observable outcomes {:?} vs target states {:?}",
            observable.keys().collect::<Vec<_>>(),
            alphas.keys().collect::<Vec<_>>()
        )))
    }
}

/// The pure Holevo operations `H_x(s) = s(A_x)·α_x`, one per outcome of `A`.
fn holevo_parts(
    observable: &Observable<Classical>,
    alphas: &BTreeMap<String, ClassicalSubstate>,
    tol: f64,
) -> Result<BTreeMap<String, ClassicalOperation>> {
    let effects: BTreeMap<String, &ClassicalEffect> =
        observable.iter().map(|(k, e)| (k.clone(), e)).collect();
    check_labels(&effects, alphas)?;
    effects
        .into_iter()
        .map(|(k, e)| {
            let op = holevo_pure(e, &alphas[&k], tol)?;
            Ok((k, op))
        })
        .collect()
}

/// The mixed Holevo operation `H^{(A,{α})}(s) = Σ_x s(A_x)·α_x`, a channel.
pub fn holevo_mixed(
    observable: &Observable<Classical>,
    alphas: &BTreeMap<String, ClassicalSubstate>,
    tol: f64,
) -> Result<ClassicalOperation> {
    let parts = holevo_parts(observable, alphas, tol)?;
    ClassicalOperation::sum(parts.values(), tol)
}

/// The Holevo instrument `x ↦ H_x`, which measures `A`.
pub fn holevo_instrument(
    observable: &Observable<Classical>,
    alphas: &BTreeMap<String, ClassicalSubstate>,
    tol: f64,
) -> Result<Instrument<Classical>> {
    Instrument::new(holevo_parts(observable, alphas, tol)?, tol)
}

/// The classical model, as a [`Model`] marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct Classical;

impl Model for Classical {
    type Effect = ClassicalEffect;
    type Substate = ClassicalSubstate;
    type Operation = ClassicalOperation;

    fn effect_dim(a: &ClassicalEffect) -> usize {
        a.dim()
    }

    fn substate_dim(s: &ClassicalSubstate) -> usize {
        s.dim()
    }

    fn operation_dim(op: &ClassicalOperation) -> usize {
        op.dim()
    }

    fn unit(dim: usize) -> ClassicalEffect {
        ClassicalEffect::unit(dim)
    }

    fn eval(s: &ClassicalSubstate, a: &ClassicalEffect) -> Result<f64> {
        s.eval(a)
    }

    fn total(s: &ClassicalSubstate) -> f64 {
        s.total()
    }

    fn apply(op: &ClassicalOperation, s: &ClassicalSubstate) -> Result<ClassicalSubstate> {
        op.apply(s)
    }

    fn compose(
        first: &ClassicalOperation,
        second: &ClassicalOperation,
    ) -> Result<ClassicalOperation> {
        first.compose(second)
    }

    fn measured_effect(op: &ClassicalOperation) -> ClassicalEffect {
        op.measured_effect()
    }

    fn combine(terms: &[(f64, &ClassicalSubstate)]) -> Result<ClassicalSubstate> {
        let dim = terms
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut weights = vec![0.0; dim];
        for (lambda, s) in terms {
            check_dim(dim, s.dim())?;
            for (w, v) in weights.iter_mut().zip(&s.weights) {
                *w += lambda * v;
            }
        }
        Ok(ClassicalSubstate { weights })
    }

    fn distance(a: &ClassicalSubstate, b: &ClassicalSubstate) -> Result<f64> {
        check_dim(a.dim(), b.dim())?;
        Ok(max_abs_diff(&a.weights, &b.weights))
    }

    fn unit_deviation(effects: &[&ClassicalEffect]) -> Result<f64> {
        let dim = effects
            .first()
            .map(|e| e.dim())
            .ok_or_else(|| Error::InvalidArgument("no effects".into()))?;
        let mut sum = vec![0.0; dim];
        for e in effects {
            check_dim(dim, e.dim())?;
            for (s, v) in sum.iter_mut().zip(&e.values) {
                *s += v;
            }
        }
        Ok(sum.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max))
    }

    fn repeatability_deviation(op: &ClassicalOperation) -> Result<f64> {
        Ok(op.repeatability_deviation())
    }
}
