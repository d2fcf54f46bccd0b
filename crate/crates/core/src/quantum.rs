//! Quantum operations and instruments on a finite-dimensional Hilbert space.
//!
//! Operations come in three forms: a general Kraus decomposition
//! `J(ρ) = Σ KᵢρKᵢ†`, the Lüders operation `L^C(ρ) = C^{1/2}ρC^{1/2}` of an
//! effect `C`, and the Holevo operation `ρ ↦ tr(ρa)·α`. Composition goes
//! through Kraus form. Each form has closed-form transition probabilities,
//! exposed next to the generic route through [`crate::transition`] so the two
//! can be compared.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    born, hermitian_sqrt, pure_density, ComplexMatrix, DensityOperator, HermitianEigen, PureState,
    QEffect,
};
use crate::model::{check_dim, Instrument, Model, Observable};
use crate::transition;
use crate::MAX_DIM;

/// `J(ρ) = Σ KᵢρKᵢ†` with `Σ Kᵢ†Kᵢ <= I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOperation {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausOperation {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let dim = kraus
            .first()
            .map(ComplexMatrix::dim)
            .ok_or_else(|| Error::InvalidOperation("no Kraus operators".into()))?;
        if dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        for k in &kraus {
            check_dim(dim, k.dim())?;
        }
        let op = Self { dim, kraus };
        let top = HermitianEigen::new(&op.effect_operator()).max();
        if top > 1.0 + tol {
            return Err(Error::InvalidOperation(format!(
                "Σ K†K has eigenvalue {top} > 1"
            )));
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Σ Kᵢ†Kᵢ`.
    pub fn effect_operator(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc
    }

    /// `Σ KᵢρKᵢ†` on an arbitrary matrix.
    fn apply_matrix(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            acc = &acc + &k.sandwich(rho);
        }
        acc
    }
}

/// `L^C(ρ) = C^{1/2}ρC^{1/2}` for an effect `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct LudersOperation {
    effect: QEffect,
    root: ComplexMatrix,
}

impl LudersOperation {
    pub fn new(effect: QEffect, tol: f64) -> Result<Self> {
        let root = hermitian_sqrt(effect.matrix(), tol)?;
        Ok(Self { effect, root })
    }

    pub fn effect(&self) -> &QEffect {
        &self.effect
    }

    /// `C^{1/2}`.
    pub fn root(&self) -> &ComplexMatrix {
        &self.root
    }

    pub fn dim(&self) -> usize {
        self.effect.dim()
    }
}

/// `ρ ↦ tr(ρa)·α`.
#[derive(Debug, Clone, PartialEq)]
pub struct QHolevoOperation {
    effect: QEffect,
    alpha: DensityOperator,
}

impl QHolevoOperation {
    pub fn new(effect: QEffect, alpha: DensityOperator, tol: f64) -> Result<Self> {
        check_dim(effect.dim(), alpha.dim())?;
        if !alpha.is_state(tol) {
            return Err(Error::InvalidSubstate(format!(
                "Holevo target must be a state, trace is {}",
                alpha.trace()
            )));
        }
        Ok(Self { effect, alpha })
    }

    pub fn effect(&self) -> &QEffect {
        &self.effect
    }

    pub fn alpha(&self) -> &DensityOperator {
        &self.alpha
    }

    /// Kraus operators `√(λ_m μ_k) |e_m⟩⟨f_k|` from `α = Σ λ_m|e_m⟩⟨e_m|` and
    /// `a = Σ μ_k|f_k⟩⟨f_k|`.
    pub fn to_kraus(&self) -> KrausOperation {
        let n = self.effect.dim();
        let alpha = HermitianEigen::new(self.alpha.matrix());
        let a = HermitianEigen::new(self.effect.matrix());
        let mut kraus = Vec::new();
        for (m, &lambda) in alpha.values.iter().enumerate() {
            for (k, &mu) in a.values.iter().enumerate() {
                let w = lambda.max(0.0) * mu.max(0.0);
                if w <= 0.0 {
                    continue;
                }
                kraus.push(
                    ComplexMatrix::outer(&alpha.eigenvector(m), &a.eigenvector(k)).scale(w.sqrt()),
                );
            }
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(n));
        }
        KrausOperation { dim: n, kraus }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QOperation {
    Kraus(KrausOperation),
    Luders(LudersOperation),
    Holevo(QHolevoOperation),
}

impl QOperation {
    pub fn identity(dim: usize) -> Self {
        QOperation::Kraus(KrausOperation::identity(dim))
    }

    pub fn dim(&self) -> usize {
        match self {
            QOperation::Kraus(k) => k.dim(),
            QOperation::Luders(l) => l.dim(),
            QOperation::Holevo(h) => h.effect.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QOperation::Kraus(_) => "kraus",
            QOperation::Luders(_) => "luders",
            QOperation::Holevo(_) => "holevo",
        }
    }

    pub fn to_kraus(&self) -> KrausOperation {
        match self {
            QOperation::Kraus(k) => k.clone(),
            QOperation::Luders(l) => KrausOperation {
                dim: l.dim(),
                kraus: vec![l.root.clone()],
            },
            QOperation::Holevo(h) => h.to_kraus(),
        }
    }
}

impl From<KrausOperation> for QOperation {
    fn from(k: KrausOperation) -> Self {
        QOperation::Kraus(k)
    }
}

impl From<LudersOperation> for QOperation {
    fn from(l: LudersOperation) -> Self {
        QOperation::Luders(l)
    }
}

impl From<QHolevoOperation> for QOperation {
    fn from(h: QHolevoOperation) -> Self {
        QOperation::Holevo(h)
    }
}

/// Applies `op` to a (possibly subnormalized) density operator.
pub fn q_apply(op: &QOperation, rho: &DensityOperator) -> Result<DensityOperator> {
    check_dim(op.dim(), rho.dim())?;
    let out = match op {
        QOperation::Kraus(k) => k.apply_matrix(rho.matrix()),
        QOperation::Luders(l) => l.root.sandwich(rho.matrix()),
        QOperation::Holevo(h) => h.alpha.matrix().scale(born(rho, &h.effect)?),
    };
    Ok(DensityOperator::from_matrix_unchecked(out.hermitian_part()))
}

/// `Ĵ`: `Σ Kᵢ†Kᵢ` for Kraus form, `C` for Lüders, `a` for Holevo.
pub fn q_measured_effect(op: &QOperation) -> QEffect {
    match op {
        QOperation::Kraus(k) => {
            QEffect::from_matrix_unchecked(k.effect_operator().hermitian_part())
        }
        QOperation::Luders(l) => l.effect.clone(),
        QOperation::Holevo(h) => h.effect.clone(),
    }
}

/// `J(ρ) / tr[J(ρ)]`.
pub fn q_update_state(op: &QOperation, rho: &DensityOperator, tol: f64) -> Result<DensityOperator> {
    transition::updated_state::<Quantum>(op, rho, tol)
}

/// `first ∘ second` in Kraus form: all products `K_j^{first} K_i^{second}`.
pub fn q_compose(first: &QOperation, second: &QOperation) -> Result<KrausOperation> {
    check_dim(first.dim(), second.dim())?;
    let f = first.to_kraus();
    let s = second.to_kraus();
    let kraus = f
        .kraus
        .iter()
        .flat_map(|kf| s.kraus.iter().map(move |ks| kf * ks))
        .collect();
    Ok(KrausOperation { dim: f.dim, kraus })
}

/// `P_{ρ,J}(A,B)` by the generic route `tr(ρA)·tr(J(ρ)~B)`.
pub fn q_transition_effect(
    rho: &DensityOperator,
    op: &QOperation,
    a: &QEffect,
    b: &QEffect,
    tol: f64,
) -> Result<f64> {
    transition::transition_prob_effect::<Quantum>(rho, op, a, b, tol)
}

/// `P_J(ρ₁,ρ₂)` by the generic route `tr[J(ρ₁)]·tr[(J∘J)(ρ₂)]`.
pub fn q_transition_state(
    op: &QOperation,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<f64> {
    transition::transition_prob_state::<Quantum>(op, rho1, rho2)
}

fn tr(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.trace_product(b).re
}

fn undefined_unless(p: f64, tol: f64) -> Result<()> {
    if p < tol {
        Err(Error::TransitionUndefined { probability: p })
    } else {
        Ok(())
    }
}

/// `tr(ρA)·tr(ρ Σ Kᵢ†BKᵢ) / tr(ρ Σ Kᵢ†Kᵢ)`.
pub fn transition_effect_kraus_form(
    rho: &DensityOperator,
    op: &KrausOperation,
    a: &QEffect,
    b: &QEffect,
    tol: f64,
) -> Result<f64> {
    check_dim(op.dim(), rho.dim())?;
    let occurs = tr(rho.matrix(), &op.effect_operator());
    undefined_unless(occurs, tol)?;
    let mut heisenberg_b = ComplexMatrix::zeros(op.dim());
    for k in op.kraus() {
        heisenberg_b = &heisenberg_b + &(&(&k.adjoint() * b.matrix()) * k);
    }
    Ok(born(rho, a)? * tr(rho.matrix(), &heisenberg_b) / occurs)
}

/// `tr(ρA)·tr(C^{1/2}ρC^{1/2}B) / tr(ρC)`.
pub fn transition_effect_luders_form(
    rho: &DensityOperator,
    op: &LudersOperation,
    a: &QEffect,
    b: &QEffect,
    tol: f64,
) -> Result<f64> {
    let occurs = born(rho, op.effect())?;
    undefined_unless(occurs, tol)?;
    let updated = op.root().sandwich(rho.matrix());
    Ok(born(rho, a)? * tr(&updated, b.matrix()) / occurs)
}

/// `⟨Aψ,ψ⟩·⟨C^{1/2}BC^{1/2}ψ,ψ⟩ / ⟨Cψ,ψ⟩` for `ρ = |ψ⟩⟨ψ|`.
pub fn transition_effect_pure_luders(
    psi: &PureState,
    op: &LudersOperation,
    a: &QEffect,
    b: &QEffect,
    tol: f64,
) -> Result<f64> {
    check_dim(op.dim(), psi.dim())?;
    let occurs = psi.expectation(op.effect().matrix());
    undefined_unless(occurs, tol)?;
    let root = op.root();
    let conjugated_b = &(root * b.matrix()) * root;
    Ok(psi.expectation(a.matrix()) * psi.expectation(&conjugated_b) / occurs)
}

/// `tr(ρb)·tr(αc)` for the Holevo operation `(a, α)`, defined when `tr(ρa) >= tol`.
pub fn transition_effect_holevo_form(
    rho: &DensityOperator,
    op: &QHolevoOperation,
    b: &QEffect,
    c: &QEffect,
    tol: f64,
) -> Result<f64> {
    undefined_unless(born(rho, op.effect())?, tol)?;
    Ok(born(rho, b)? * born(op.alpha(), c)?)
}

/// `tr(ρ₁ Σᵢ Kᵢ†Kᵢ)·tr(ρ₂ Σᵢⱼ Kᵢ†Kⱼ†KⱼKᵢ)`.
pub fn transition_state_kraus_form(
    op: &KrausOperation,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<f64> {
    check_dim(op.dim(), rho1.dim())?;
    check_dim(op.dim(), rho2.dim())?;
    let once = op.effect_operator();
    let mut twice = ComplexMatrix::zeros(op.dim());
    for ki in op.kraus() {
        for kj in op.kraus() {
            let kjki = kj * ki;
            twice = &twice + &(&kjki.adjoint() * &kjki);
        }
    }
    Ok(tr(rho1.matrix(), &once) * tr(rho2.matrix(), &twice))
}

/// `tr(ρ₁A)·tr(ρ₂A²)` for `L^A`.
pub fn transition_state_luders_form(
    op: &LudersOperation,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<f64> {
    let a = op.effect().matrix();
    check_dim(a.dim(), rho2.dim())?;
    Ok(born(rho1, op.effect())? * tr(rho2.matrix(), &(a * a)))
}

/// `⟨Aψ₁,ψ₁⟩·⟨A²ψ₂,ψ₂⟩` for `L^A` and pure states.
pub fn transition_state_pure_luders(
    op: &LudersOperation,
    psi1: &PureState,
    psi2: &PureState,
) -> Result<f64> {
    let a = op.effect().matrix();
    check_dim(a.dim(), psi1.dim())?;
    check_dim(a.dim(), psi2.dim())?;
    Ok(psi1.expectation(a) * psi2.expectation(&(a * a)))
}

/// `|⟨ψ,ψ₁⟩|²·|⟨ψ,ψ₂⟩|²` for `L^A` with `A = |ψ⟩⟨ψ|`.
pub fn transition_state_rank_one(
    psi: &PureState,
    psi1: &PureState,
    psi2: &PureState,
) -> Result<f64> {
    check_dim(psi.dim(), psi1.dim())?;
    check_dim(psi.dim(), psi2.dim())?;
    Ok(psi.inner(psi1).norm_sqr() * psi.inner(psi2).norm_sqr())
}

/// `tr(ρ₁a)·tr(ρ₂a)·tr(αa)` for the Holevo operation `(a, α)`.
pub fn transition_state_holevo_form(
    op: &QHolevoOperation,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<f64> {
    Ok(born(rho1, op.effect())? * born(rho2, op.effect())? * born(op.alpha(), op.effect())?)
}

/// The formula a transition probability was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionPath {
    /// Apply, normalize and evaluate, through [`crate::transition`].
    Generic,
    /// Kraus-sum closed form.
    Kraus,
    /// Lüders closed form.
    Luders,
    /// Lüders closed form on pure-state vectors.
    PureLuders,
    /// Lüders operation of a rank-one projection on pure states.
    RankOne,
    /// Holevo closed form.
    Holevo,
}

impl TransitionPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransitionPath::Generic => "generic",
            TransitionPath::Kraus => "kraus",
            TransitionPath::Luders => "luders",
            TransitionPath::PureLuders => "pure-luders",
            TransitionPath::RankOne => "rank-one",
            TransitionPath::Holevo => "holevo",
        }
    }
}

impl fmt::Display for TransitionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `P_{ρ,J}(A,B)` by the generic route and by every closed form that applies
/// to `op` and `ρ`. The generic value comes first.
pub fn transition_effect_paths(
    rho: &DensityOperator,
    op: &QOperation,
    a: &QEffect,
    b: &QEffect,
    tol: f64,
) -> Result<Vec<(TransitionPath, f64)>> {
    let mut out = vec![(
        TransitionPath::Generic,
        q_transition_effect(rho, op, a, b, tol)?,
    )];
    out.push((
        TransitionPath::Kraus,
        transition_effect_kraus_form(rho, &op.to_kraus(), a, b, tol)?,
    ));
    match op {
        QOperation::Luders(l) => {
            out.push((
                TransitionPath::Luders,
                transition_effect_luders_form(rho, l, a, b, tol)?,
            ));
            if let Some(psi) = PureState::from_density(rho, tol) {
                out.push((
                    TransitionPath::PureLuders,
                    transition_effect_pure_luders(&psi, l, a, b, tol)?,
                ));
            }
        }
        QOperation::Holevo(h) => out.push((
            TransitionPath::Holevo,
            transition_effect_holevo_form(rho, h, a, b, tol)?,
        )),
        QOperation::Kraus(_) => {}
    }
    Ok(out)
}

/// `P_J(ρ₁,ρ₂)` by the generic route and by every applicable closed form.
pub fn transition_state_paths(
    op: &QOperation,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    tol: f64,
) -> Result<Vec<(TransitionPath, f64)>> {
    let mut out = vec![(TransitionPath::Generic, q_transition_state(op, rho1, rho2)?)];
    out.push((
        TransitionPath::Kraus,
        transition_state_kraus_form(&op.to_kraus(), rho1, rho2)?,
    ));
    match op {
        QOperation::Luders(l) => {
            out.push((
                TransitionPath::Luders,
                transition_state_luders_form(l, rho1, rho2)?,
            ));
            let pure = (
                PureState::from_density(rho1, tol),
                PureState::from_density(rho2, tol),
            );
            if let (Some(psi1), Some(psi2)) = pure {
                out.push((
                    TransitionPath::PureLuders,
                    transition_state_pure_luders(l, &psi1, &psi2)?,
                ));
                let effect = l.effect();
                let rank_one =
                    effect.is_projection(tol) && (effect.matrix().trace().re - 1.0).abs() <= tol;
                if rank_one {
                    let psi = PureState::from_density(
                        &DensityOperator::from_matrix_unchecked(effect.matrix().clone()),
                        tol,
                    );
                    if let Some(psi) = psi {
                        out.push((
                            TransitionPath::RankOne,
                            transition_state_rank_one(&psi, &psi1, &psi2)?,
                        ));
                    }
                }
            }
        }
        QOperation::Holevo(h) => out.push((
            TransitionPath::Holevo,
            transition_state_holevo_form(h, rho1, rho2)?,
        )),
        QOperation::Kraus(_) => {}
    }
    Ok(out)
}

/// Density operators whose real span is every Hermitian matrix:
/// `|eᵢ⟩⟨eᵢ|` and the projections onto `(eᵢ + eⱼ)/√2` and `(eᵢ + i·eⱼ)/√2`.
pub fn spanning_densities(dim: usize) -> Vec<DensityOperator> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        out.push(pure_density(&PureState::basis(dim, i)));
        for j in (i + 1)..dim {
            for phase in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[i] = Complex64::new(h, 0.0);
                v[j] = phase;
                out.push(DensityOperator::from_matrix_unchecked(
                    ComplexMatrix::outer(&v, &v),
                ));
            }
        }
    }
    out
}

/// `max |(J∘J)(ρ) − J(ρ)|` over the spanning densities. Zero iff `J∘J = J`.
pub fn q_repeatability_deviation(op: &QOperation) -> Result<f64> {
    let twice = QOperation::Kraus(q_compose(op, op)?);
    let mut dev: f64 = 0.0;
    for rho in spanning_densities(op.dim()) {
        let once = q_apply(op, &rho)?;
        let again = q_apply(&twice, &rho)?;
        dev = dev.max(once.matrix().max_abs_diff(again.matrix()));
    }
    Ok(dev)
}

pub fn q_is_repeatable(op: &QOperation, tol: f64) -> Result<bool> {
    Ok(q_repeatability_deviation(op)? <= tol)
}

/// The Lüders instrument `x ↦ L^{A_x}` of an observable; it measures `A`.
pub fn luders_instrument(
    observable: &Observable<Quantum>,
    tol: f64,
) -> Result<Instrument<Quantum>> {
    let ops = observable
        .iter()
        .map(|(k, e)| {
            Ok((
                k.clone(),
                QOperation::Luders(LudersOperation::new(e.clone(), tol)?),
            ))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Instrument::new(ops, tol)
}

/// The Holevo instrument `x ↦ (ρ ↦ tr(ρA_x)·α_x)`.
pub fn q_holevo_instrument(
    observable: &Observable<Quantum>,
    alphas: &BTreeMap<String, DensityOperator>,
    tol: f64,
) -> Result<Instrument<Quantum>> {
    if !observable.labels().iter().eq(alphas.keys()) {
        return Err(Error::OutcomeMismatch(format!(
            "observable outcomes {:?} vs target states {:?}",
            observable.labels(),
            alphas.keys().collect::<Vec<_>>()
        )));
    }
    let ops = observable
        .iter()
        .map(|(k, e)| {
            let h = QHolevoOperation::new(e.clone(), alphas[k].clone(), tol)?;
            Ok((k.clone(), QOperation::Holevo(h)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Instrument::new(ops, tol)
}

/// The Hilbert space model, as a [`Model`] marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct Quantum;

impl Model for Quantum {
    type Effect = QEffect;
    type Substate = DensityOperator;
    type Operation = QOperation;

    fn effect_dim(a: &QEffect) -> usize {
        a.dim()
    }

    fn substate_dim(s: &DensityOperator) -> usize {
        s.dim()
    }

    fn operation_dim(op: &QOperation) -> usize {
        op.dim()
    }

    fn unit(dim: usize) -> QEffect {
        QEffect::identity(dim)
    }

    fn eval(s: &DensityOperator, a: &QEffect) -> Result<f64> {
        born(s, a)
    }

    fn total(s: &DensityOperator) -> f64 {
        s.trace()
    }

    fn apply(op: &QOperation, s: &DensityOperator) -> Result<DensityOperator> {
        q_apply(op, s)
    }

    fn compose(first: &QOperation, second: &QOperation) -> Result<QOperation> {
        q_compose(first, second).map(QOperation::Kraus)
    }

    fn measured_effect(op: &QOperation) -> QEffect {
        q_measured_effect(op)
    }

    fn combine(terms: &[(f64, &DensityOperator)]) -> Result<DensityOperator> {
        let dim = terms
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidArgument("empty combination".into()))?;
        let mut acc = ComplexMatrix::zeros(dim);
        for (lambda, s) in terms {
            check_dim(dim, s.dim())?;
            acc = &acc + &s.matrix().scale(*lambda);
        }
        Ok(DensityOperator::from_matrix_unchecked(acc))
    }

    fn distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
        check_dim(a.dim(), b.dim())?;
        Ok(a.matrix().max_abs_diff(b.matrix()))
    }

    fn unit_deviation(effects: &[&QEffect]) -> Result<f64> {
        let dim = effects
            .first()
            .map(|e| e.dim())
            .ok_or_else(|| Error::InvalidArgument("no effects".into()))?;
        let mut acc = ComplexMatrix::zeros(dim);
        for e in effects {
            check_dim(dim, e.dim())?;
            acc = &acc + e.matrix();
        }
        Ok(acc.max_abs_diff(&ComplexMatrix::identity(dim)))
    }

    fn repeatability_deviation(op: &QOperation) -> Result<f64> {
        q_repeatability_deviation(op)
    }
}
