//! Validated objects built from a [`Scenario`].

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use qtrans_core::classical::{holevo_instrument, holevo_pure};
use qtrans_core::hilbert::{validate_operator, OperatorKind};
use qtrans_core::quantum::{
    luders_instrument, q_holevo_instrument, spanning_densities, transition_effect_paths,
    transition_state_paths,
};
use qtrans_core::random::RandomModel;
use qtrans_core::transition::{transition_prob_effect, transition_prob_state};
use qtrans_core::{
    Classical, ClassicalEffect, ClassicalOperation, ClassicalSubstate, ComplexMatrix,
    DensityOperator, Error, Instrument, KrausOperation, LudersOperation, Model, Observable,
    PureState, QEffect, QHolevoOperation, QOperation, Quantum, TransitionPath,
};

use crate::scenario::{
    EffectSpec, Entry, InstrumentSpec, MatrixLiteral, ModelKind, OperationSpec, Scenario, StateSpec,
};

pub const BUILTIN_EFFECTS: [&str; 2] = ["unit", "zero"];

/// One object that failed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub section: &'static str,
    pub name: String,
    pub message: String,
}

/// An operation together with how the scenario described it.
#[derive(Debug)]
pub struct OpEntry<M: Model> {
    pub op: M::Operation,
    pub kind: &'static str,
    /// `(a, α)` for a pure Holevo operation.
    pub holevo: Option<(M::Effect, M::Substate)>,
}

impl<M: Model> Clone for OpEntry<M> {
    fn clone(&self) -> Self {
        Self {
            op: self.op.clone(),
            kind: self.kind,
            holevo: self.holevo.clone(),
        }
    }
}

/// An instrument with the per-outcome description of its operations.
#[derive(Debug, Clone)]
pub struct InstrumentEntry<M: Model> {
    pub instrument: Instrument<M>,
    pub kind: &'static str,
    pub parts: BTreeMap<String, OpEntry<M>>,
}

pub struct World<M: Model> {
    pub dim: usize,
    pub tol: f64,
    pub states: BTreeMap<String, M::Substate>,
    pub effects: BTreeMap<String, M::Effect>,
    pub observables: BTreeMap<String, Observable<M>>,
    pub operations: BTreeMap<String, OpEntry<M>>,
    pub instruments: BTreeMap<String, InstrumentEntry<M>>,
    pub violations: Vec<Violation>,
    invalid: BTreeSet<(&'static str, String)>,
}

/// Model-specific parts of loading and reporting.
pub trait ScenarioModel: RandomModel + ZeroEffect {
    const KIND: ModelKind;

    fn build_state(spec: &StateSpec, tol: f64) -> Result<Self::Substate, String>;
    fn build_effect(spec: &EffectSpec, tol: f64) -> Result<Self::Effect, String>;
    fn build_operation(
        spec: &OperationSpec,
        world: &World<Self>,
        tol: f64,
    ) -> Result<OpEntry<Self>, String>;
    fn holevo_instrument(
        observable: &Observable<Self>,
        alphas: &BTreeMap<String, Self::Substate>,
        tol: f64,
    ) -> Result<Instrument<Self>, String>;
    fn luders_instrument(
        observable: &Observable<Self>,
        tol: f64,
    ) -> Result<Instrument<Self>, String>;

    /// Substates whose span contains every substate.
    fn probe_states(dim: usize) -> Vec<Self::Substate>;

    /// `P_{s,J}(a,b)` by every route that applies; the generic value first.
    fn effect_paths(
        entry: &OpEntry<Self>,
        s: &Self::Substate,
        a: &Self::Effect,
        b: &Self::Effect,
        tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>>;

    /// `P_J(s₁,s₂)` by every route that applies; the generic value first.
    fn state_paths(
        entry: &OpEntry<Self>,
        s1: &Self::Substate,
        s2: &Self::Substate,
        tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>>;

    /// `‖C² − C‖_max` when the operation is a Lüders operation `L^C`.
    fn projection_deviation(entry: &OpEntry<Self>) -> Option<f64>;
}

fn err(e: Error) -> String {
    e.to_string()
}

fn complex_vector(v: &[Entry]) -> Vec<Complex64> {
    v.iter().map(|e| e.to_complex()).collect()
}

fn complex_matrix(m: &MatrixLiteral) -> Result<ComplexMatrix, String> {
    ComplexMatrix::from_rows(m.iter().map(|r| complex_vector(r)).collect()).map_err(err)
}

fn validation_failure(m: &ComplexMatrix, kind: OperatorKind, tol: f64) -> Result<(), String> {
    let report = validate_operator(m, kind, tol);
    if report.passed() {
        Ok(())
    } else {
        Err(report.failures.join("; "))
    }
}

fn classical_form_only(what: &str) -> String {
    format!("{what} must be a plain array of reals in a classical scenario")
}

fn quantum_form_only(what: &str) -> String {
    format!("{what} needs a vector or matrix form in a quantum scenario")
}

impl<M: ScenarioModel> World<M> {
    pub fn build(scenario: &Scenario, tol: f64) -> Self {
        let mut w = World {
            dim: scenario.dim,
            tol,
            states: BTreeMap::new(),
            effects: BTreeMap::new(),
            observables: BTreeMap::new(),
            operations: BTreeMap::new(),
            instruments: BTreeMap::new(),
            violations: Vec::new(),
            invalid: BTreeSet::new(),
        };
        if scenario.model != M::KIND {
            w.violations.push(Violation {
                section: "scenario",
                name: "model".into(),
                message: format!("expected model {}", M::KIND.as_str()),
            });
            return w;
        }

        for (name, spec) in &scenario.effects {
            let built = M::build_effect(spec, tol).and_then(|e| w.check_dim(M::effect_dim(&e), e));
            w.record("effects", name, built, |w, e| {
                w.effects.insert(name.clone(), e);
            });
        }
        for name in BUILTIN_EFFECTS {
            if !scenario.effects.contains_key(name) {
                let e = if name == "unit" {
                    M::unit(w.dim)
                } else {
                    M::zero_effect(w.dim)
                };
                w.effects.insert(name.into(), e);
            }
        }

        for (name, spec) in &scenario.states {
            let built = M::build_state(spec, tol).and_then(|s| {
                let s = w.check_dim(M::substate_dim(&s), s)?;
                if (M::total(&s) - 1.0).abs() > tol {
                    return Err(format!("total probability {} is not 1", M::total(&s)));
                }
                Ok(s)
            });
            w.record("states", name, built, |w, s| {
                w.states.insert(name.clone(), s);
            });
        }

        for (name, effects) in &scenario.observables {
            let built = effects
                .iter()
                .map(|(label, e)| Ok((label.clone(), w.effect(e)?.clone())))
                .collect::<Result<BTreeMap<_, _>, String>>()
                .and_then(|map| Observable::new(map, tol).map_err(err));
            w.record("observables", name, built, |w, o| {
                w.observables.insert(name.clone(), o);
            });
        }

        for (name, spec) in &scenario.operations {
            let built = M::build_operation(spec, &w, tol)
                .and_then(|entry| w.check_dim(M::operation_dim(&entry.op), entry));
            w.record("operations", name, built, |w, op| {
                w.operations.insert(name.clone(), op);
            });
        }

        for (name, spec) in &scenario.instruments {
            let built = w.build_instrument(spec, tol);
            w.record("instruments", name, built, |w, inst| {
                w.instruments.insert(name.clone(), inst);
            });
        }
        w
    }

    fn record<T>(
        &mut self,
        section: &'static str,
        name: &str,
        built: Result<T, String>,
        insert: impl FnOnce(&mut Self, T),
    ) {
        match built {
            Ok(v) => insert(self, v),
            Err(message) => {
                self.invalid.insert((section, name.to_string()));
                self.violations.push(Violation {
                    section,
                    name: name.to_string(),
                    message,
                });
            }
        }
    }

    fn check_dim<T>(&self, found: usize, value: T) -> Result<T, String> {
        if found == self.dim {
            Ok(value)
        } else {
            Err(format!(
                "dimension {found} differs from the scenario dimension {}",
                self.dim
            ))
        }
    }

    fn lookup<'a, T>(
        &self,
        map: &'a BTreeMap<String, T>,
        section: &'static str,
        what: &str,
        name: &str,
    ) -> Result<&'a T, String> {
        map.get(name).ok_or_else(|| {
            if self.invalid.contains(&(section, name.to_string())) {
                format!("refers to invalid {what} '{name}'")
            } else {
                format!("unknown {what} '{name}'")
            }
        })
    }

    pub fn state(&self, name: &str) -> Result<&M::Substate, String> {
        self.lookup(&self.states, "states", "state", name)
    }

    pub fn effect(&self, name: &str) -> Result<&M::Effect, String> {
        self.lookup(&self.effects, "effects", "effect", name)
    }

    pub fn observable(&self, name: &str) -> Result<&Observable<M>, String> {
        self.lookup(&self.observables, "observables", "observable", name)
    }

    pub fn operation(&self, name: &str) -> Result<&OpEntry<M>, String> {
        self.lookup(&self.operations, "operations", "operation", name)
    }

    pub fn instrument(&self, name: &str) -> Result<&InstrumentEntry<M>, String> {
        self.lookup(&self.instruments, "instruments", "instrument", name)
    }

    pub fn alphas(
        &self,
        alphas: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, M::Substate>, String> {
        alphas
            .iter()
            .map(|(label, s)| Ok((label.clone(), self.state(s)?.clone())))
            .collect()
    }

    fn build_instrument(
        &self,
        spec: &InstrumentSpec,
        tol: f64,
    ) -> Result<InstrumentEntry<M>, String> {
        let (instrument, parts) = match spec {
            InstrumentSpec::Operations { operations } => {
                let parts = operations
                    .iter()
                    .map(|(label, op)| Ok((label.clone(), self.operation(op)?.clone())))
                    .collect::<Result<BTreeMap<_, _>, String>>()?;
                let ops = parts
                    .iter()
                    .map(|(k, e)| (k.clone(), e.op.clone()))
                    .collect();
                (Instrument::new(ops, tol).map_err(err)?, parts)
            }
            InstrumentSpec::Luders { observable } => {
                let inst = M::luders_instrument(self.observable(observable)?, tol)?;
                let parts = inst
                    .iter()
                    .map(|(k, op)| {
                        let entry = OpEntry {
                            op: op.clone(),
                            kind: "luders",
                            holevo: None,
                        };
                        (k.clone(), entry)
                    })
                    .collect();
                (inst, parts)
            }
            InstrumentSpec::Holevo { observable, alphas } => {
                let obs = self.observable(observable)?;
                let alphas = self.alphas(alphas)?;
                let inst = M::holevo_instrument(obs, &alphas, tol)?;
                let parts = inst
                    .iter()
                    .map(|(k, op)| {
                        let a = obs.effect(k).expect("labels checked").clone();
                        let entry = OpEntry {
                            op: op.clone(),
                            kind: "holevo",
                            holevo: Some((a, alphas[k].clone())),
                        };
                        (k.clone(), entry)
                    })
                    .collect();
                (inst, parts)
            }
        };
        let kind = match spec {
            InstrumentSpec::Operations { .. } => "operations",
            InstrumentSpec::Luders { .. } => "luders",
            InstrumentSpec::Holevo { .. } => "holevo",
        };
        Ok(InstrumentEntry {
            instrument,
            kind,
            parts,
        })
    }

    /// Names of effects the scenario defined itself.
    pub fn is_builtin_effect(&self, scenario: &Scenario, name: &str) -> bool {
        BUILTIN_EFFECTS.contains(&name) && !scenario.effects.contains_key(name)
    }
}

/// The zero effect, for the predefined `"zero"` name.
pub trait ZeroEffect: Model {
    fn zero_effect(dim: usize) -> Self::Effect;
}

impl ZeroEffect for Classical {
    fn zero_effect(dim: usize) -> ClassicalEffect {
        ClassicalEffect::zero(dim)
    }
}

impl ZeroEffect for Quantum {
    fn zero_effect(dim: usize) -> QEffect {
        QEffect::zero(dim)
    }
}

fn holevo_closed_effect<M: Model>(
    (a, alpha): &(M::Effect, M::Substate),
    s: &M::Substate,
    b: &M::Effect,
    c: &M::Effect,
    tol: f64,
) -> qtrans_core::Result<f64> {
    let occurs = M::eval(s, a)?;
    if occurs < tol {
        return Err(Error::TransitionUndefined {
            probability: occurs,
        });
    }
    Ok(M::eval(s, b)? * M::eval(alpha, c)?)
}

fn holevo_closed_state<M: Model>(
    (a, alpha): &(M::Effect, M::Substate),
    s1: &M::Substate,
    s2: &M::Substate,
) -> qtrans_core::Result<f64> {
    Ok(M::eval(s1, a)? * M::eval(s2, a)? * M::eval(alpha, a)?)
}

impl ScenarioModel for Classical {
    const KIND: ModelKind = ModelKind::Classical;

    fn build_state(spec: &StateSpec, tol: f64) -> Result<ClassicalSubstate, String> {
        match spec {
            StateSpec::Weights(w) => ClassicalSubstate::new(w.clone(), tol).map_err(err),
            _ => Err(classical_form_only("a state")),
        }
    }

    fn build_effect(spec: &EffectSpec, tol: f64) -> Result<ClassicalEffect, String> {
        match spec {
            EffectSpec::Values(v) => ClassicalEffect::new(v.clone(), tol).map_err(err),
            _ => Err(classical_form_only("an effect")),
        }
    }

    fn build_operation(
        spec: &OperationSpec,
        world: &World<Self>,
        tol: f64,
    ) -> Result<OpEntry<Self>, String> {
        let kind = spec.kind();
        let (op, holevo) = match spec {
            OperationSpec::Identity => (ClassicalOperation::identity(world.dim), None),
            OperationSpec::Matrix { matrix } => (
                ClassicalOperation::new(matrix.clone(), tol).map_err(err)?,
                None,
            ),
            OperationSpec::Holevo { effect, alpha } => {
                let (a, alpha) = (world.effect(effect)?.clone(), world.state(alpha)?.clone());
                (holevo_pure(&a, &alpha, tol).map_err(err)?, Some((a, alpha)))
            }
            OperationSpec::HolevoMixed { observable, alphas } => {
                let obs = world.observable(observable)?;
                let op = qtrans_core::classical::holevo_mixed(obs, &world.alphas(alphas)?, tol)
                    .map_err(err)?;
                (op, None)
            }
            OperationSpec::Kraus { .. } | OperationSpec::Luders { .. } => {
                return Err(format!("{kind} operations need the quantum model"))
            }
        };
        Ok(OpEntry { op, kind, holevo })
    }

    fn holevo_instrument(
        observable: &Observable<Self>,
        alphas: &BTreeMap<String, ClassicalSubstate>,
        tol: f64,
    ) -> Result<Instrument<Self>, String> {
        holevo_instrument(observable, alphas, tol).map_err(err)
    }

    fn luders_instrument(_: &Observable<Self>, _: f64) -> Result<Instrument<Self>, String> {
        Err("luders instruments need the quantum model".into())
    }

    fn probe_states(dim: usize) -> Vec<ClassicalSubstate> {
        (0..dim).map(|i| ClassicalSubstate::point(dim, i)).collect()
    }

    fn effect_paths(
        entry: &OpEntry<Self>,
        s: &ClassicalSubstate,
        a: &ClassicalEffect,
        b: &ClassicalEffect,
        tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>> {
        let mut out = vec![(
            TransitionPath::Generic,
            transition_prob_effect::<Classical>(s, &entry.op, a, b, tol)?,
        )];
        if let Some(h) = &entry.holevo {
            out.push((
                TransitionPath::Holevo,
                holevo_closed_effect::<Classical>(h, s, a, b, tol)?,
            ));
        }
        Ok(out)
    }

    fn state_paths(
        entry: &OpEntry<Self>,
        s1: &ClassicalSubstate,
        s2: &ClassicalSubstate,
        _tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>> {
        let mut out = vec![(
            TransitionPath::Generic,
            transition_prob_state::<Classical>(&entry.op, s1, s2)?,
        )];
        if let Some(h) = &entry.holevo {
            out.push((
                TransitionPath::Holevo,
                holevo_closed_state::<Classical>(h, s1, s2)?,
            ));
        }
        Ok(out)
    }

    fn projection_deviation(_: &OpEntry<Self>) -> Option<f64> {
        None
    }
}

fn quantum_state(spec: &StateSpec, tol: f64) -> Result<DensityOperator, String> {
    match spec {
        StateSpec::Vector { vector } => {
            let psi = PureState::new(complex_vector(vector), tol).map_err(err)?;
            Ok(qtrans_core::pure_density(&psi))
        }
        StateSpec::Matrix { matrix } => {
            let m = complex_matrix(matrix)?;
            validation_failure(&m, OperatorKind::Density, tol)?;
            DensityOperator::new(m, tol).map_err(err)
        }
        StateSpec::Weights(_) => Err(quantum_form_only("a state")),
    }
}

impl ScenarioModel for Quantum {
    const KIND: ModelKind = ModelKind::Quantum;

    fn build_state(spec: &StateSpec, tol: f64) -> Result<DensityOperator, String> {
        quantum_state(spec, tol)
    }

    fn build_effect(spec: &EffectSpec, tol: f64) -> Result<QEffect, String> {
        match spec {
            EffectSpec::Projector { projector } => {
                let psi = PureState::new(complex_vector(projector), tol).map_err(err)?;
                Ok(QEffect::projector(&psi))
            }
            EffectSpec::Matrix { matrix } => {
                let m = complex_matrix(matrix)?;
                validation_failure(&m, OperatorKind::Effect, tol)?;
                QEffect::new(m, tol).map_err(err)
            }
            EffectSpec::Values(_) => Err(quantum_form_only("an effect")),
        }
    }

    fn build_operation(
        spec: &OperationSpec,
        world: &World<Self>,
        tol: f64,
    ) -> Result<OpEntry<Self>, String> {
        let kind = spec.kind();
        let (op, holevo) = match spec {
            OperationSpec::Identity => (QOperation::identity(world.dim), None),
            OperationSpec::Kraus { kraus } => {
                let ks = kraus
                    .iter()
                    .map(complex_matrix)
                    .collect::<Result<Vec<_>, _>>()?;
                (
                    QOperation::Kraus(KrausOperation::new(ks, tol).map_err(err)?),
                    None,
                )
            }
            OperationSpec::Luders { effect } => {
                let c = world.effect(effect)?.clone();
                (
                    QOperation::Luders(LudersOperation::new(c, tol).map_err(err)?),
                    None,
                )
            }
            OperationSpec::Holevo { effect, alpha } => {
                let (a, alpha) = (world.effect(effect)?.clone(), world.state(alpha)?.clone());
                let h = QHolevoOperation::new(a.clone(), alpha.clone(), tol).map_err(err)?;
                (QOperation::Holevo(h), Some((a, alpha)))
            }
            OperationSpec::HolevoMixed { observable, alphas } => {
                let inst =
                    q_holevo_instrument(world.observable(observable)?, &world.alphas(alphas)?, tol)
                        .map_err(err)?;
                let ks = inst
                    .iter()
                    .flat_map(|(_, op)| op.to_kraus().kraus().to_vec())
                    .collect();
                (
                    QOperation::Kraus(KrausOperation::new(ks, tol).map_err(err)?),
                    None,
                )
            }
            OperationSpec::Matrix { .. } => {
                return Err("matrix operations need the classical model".into())
            }
        };
        Ok(OpEntry { op, kind, holevo })
    }

    fn holevo_instrument(
        observable: &Observable<Self>,
        alphas: &BTreeMap<String, DensityOperator>,
        tol: f64,
    ) -> Result<Instrument<Self>, String> {
        q_holevo_instrument(observable, alphas, tol).map_err(err)
    }

    fn luders_instrument(
        observable: &Observable<Self>,
        tol: f64,
    ) -> Result<Instrument<Self>, String> {
        luders_instrument(observable, tol).map_err(err)
    }

    fn probe_states(dim: usize) -> Vec<DensityOperator> {
        spanning_densities(dim)
    }

    fn effect_paths(
        entry: &OpEntry<Self>,
        rho: &DensityOperator,
        a: &QEffect,
        b: &QEffect,
        tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>> {
        transition_effect_paths(rho, &entry.op, a, b, tol)
    }

    fn state_paths(
        entry: &OpEntry<Self>,
        rho1: &DensityOperator,
        rho2: &DensityOperator,
        tol: f64,
    ) -> qtrans_core::Result<Vec<(TransitionPath, f64)>> {
        transition_state_paths(&entry.op, rho1, rho2, tol)
    }

    fn projection_deviation(entry: &OpEntry<Self>) -> Option<f64> {
        match &entry.op {
            QOperation::Luders(l) => Some(l.effect().projection_deviation()),
            _ => None,
        }
    }
}
