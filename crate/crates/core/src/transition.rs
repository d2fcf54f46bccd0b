//! Transition probabilities and the distributions built from them, for any
//! [`Model`].

use crate::error::{Error, Result};
use crate::model::{check_dim, Instrument, Model, Observable};
use crate::table::{Axis, DistributionTable};

/// `J(s)~ = J(s) / J(s)(1)`, the state after `op` is measured and occurs.
pub fn updated_state<M: Model>(
    op: &M::Operation,
    s: &M::Substate,
    tol: f64,
) -> Result<M::Substate> {
    let js = M::apply(op, s)?;
    let p = M::total(&js);
    if p < tol {
        return Err(Error::TransitionUndefined { probability: p });
    }
    M::scale(&js, 1.0 / p)
}

/// `P_{s,J}(a,b) = s(a) · J(s)(b) / J(s)(1)`: the probability that `a` occurs in
/// `s` times the probability that `b` occurs in the updated state `J(s)~`.
///
/// `s` may be a substate. Fails with [`Error::TransitionUndefined`] when
/// `J(s)(1) < tol`.
pub fn transition_prob_effect<M: Model>(
    s: &M::Substate,
    op: &M::Operation,
    a: &M::Effect,
    b: &M::Effect,
    tol: f64,
) -> Result<f64> {
    let js = M::apply(op, s)?;
    let occurs = M::total(&js);
    if occurs < tol {
        return Err(Error::TransitionUndefined {
            probability: occurs,
        });
    }
    Ok(M::eval(s, a)? * M::eval(&js, b)? / occurs)
}

/// `P_J(s₁,s₂) = J(s₁)(1) · (J∘J)(s₂)(1)`.
pub fn transition_prob_state<M: Model>(
    op: &M::Operation,
    s1: &M::Substate,
    s2: &M::Substate,
) -> Result<f64> {
    check_dim(M::substate_dim(s1), M::substate_dim(s2))?;
    let twice = M::compose(op, op)?;
    Ok(M::total(&M::apply(op, s1)?) * M::total(&M::apply(&twice, s2)?))
}

/// `Φ_s^A`: `x ↦ s(A_x)`.
pub fn observable_distribution<M: Model>(
    s: &M::Substate,
    observable: &Observable<M>,
) -> Result<DistributionTable> {
    let entries = observable
        .iter()
        .map(|(_, e)| M::eval(s, e))
        .collect::<Result<Vec<_>>>()?;
    DistributionTable::new(vec![Axis::new("observable", observable.labels())], entries)
}

/// `Φ_s^I`: `x ↦ I_x(s)(1)`.
pub fn instrument_distribution<M: Model>(
    s: &M::Substate,
    instrument: &Instrument<M>,
) -> Result<DistributionTable> {
    let entries = instrument
        .iter()
        .map(|(_, op)| M::apply(op, s).map(|t| M::total(&t)))
        .collect::<Result<Vec<_>>>()?;
    DistributionTable::new(vec![Axis::new("instrument", instrument.labels())], entries)
}

/// The table `P_{xy} = P_{s,J}(A_x, B_y)` over `Ω_A × Ω_B`.
///
/// For a state `s` it is a probability measure whose row marginal is `Φ_s^A`
/// and whose column marginal is `Φ_{J(s)~}^B`.
pub fn joint_effect_distribution<M: Model>(
    s: &M::Substate,
    op: &M::Operation,
    a: &Observable<M>,
    b: &Observable<M>,
    tol: f64,
) -> Result<DistributionTable> {
    let js = M::apply(op, s)?;
    let occurs = M::total(&js);
    if occurs < tol {
        return Err(Error::TransitionUndefined {
            probability: occurs,
        });
    }
    let sa = a
        .iter()
        .map(|(_, e)| M::eval(s, e))
        .collect::<Result<Vec<_>>>()?;
    let jb = b
        .iter()
        .map(|(_, e)| M::eval(&js, e))
        .collect::<Result<Vec<_>>>()?;
    let entries = sa
        .iter()
        .flat_map(|x| jb.iter().map(move |y| x * y / occurs))
        .collect();
    DistributionTable::new(
        vec![Axis::new("A", a.labels()), Axis::new("B", b.labels())],
        entries,
    )
}

/// The three-way table `Q(z,x,y) = s(A_x) · I_z(s)(B_y)` over
/// `Ω_I × Ω_A × Ω_B`, equal to `I_z(s)(1) · P_{s,I_z}(A_x,B_y)` wherever the
/// latter is defined.
///
/// Its marginals are `Φ_s^I` (over `z`), `Φ_s^A` (over `x`) and `Φ_{Ī(s)}^B`
/// (over `y`).
pub fn instrument_joint_distribution<M: Model>(
    s: &M::Substate,
    instrument: &Instrument<M>,
    a: &Observable<M>,
    b: &Observable<M>,
) -> Result<DistributionTable> {
    check_dim(instrument.dim(), M::substate_dim(s))?;
    let sa = a
        .iter()
        .map(|(_, e)| M::eval(s, e))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(instrument.len() * a.len() * b.len());
    for (_, op) in instrument.iter() {
        let zs = M::apply(op, s)?;
        let zb = b
            .iter()
            .map(|(_, e)| M::eval(&zs, e))
            .collect::<Result<Vec<_>>>()?;
        for x in &sa {
            entries.extend(zb.iter().map(|y| x * y));
        }
    }
    DistributionTable::new(
        vec![
            Axis::new("instrument", instrument.labels()),
            Axis::new("A", a.labels()),
            Axis::new("B", b.labels()),
        ],
        entries,
    )
}

/// `(P_I)_{(x,y)}(s₁,s₂) = I_x(s₁)(1) · I_y(Ī(s₂))(1)` over `Ω_I × Ω_I`.
pub fn instrument_state_transition<M: Model>(
    instrument: &Instrument<M>,
    s1: &M::Substate,
    s2: &M::Substate,
) -> Result<DistributionTable> {
    check_dim(M::substate_dim(s1), M::substate_dim(s2))?;
    let first = instrument_distribution(s1, instrument)?;
    let bar = instrument.apply_sum(s2)?;
    let second = instrument_distribution(&bar, instrument)?;
    let entries = first
        .entries()
        .iter()
        .flat_map(|x| second.entries().iter().map(move |y| x * y))
        .collect();
    let labels = instrument.labels();
    DistributionTable::new(
        vec![
            Axis::new("first", labels.clone()),
            Axis::new("second", labels),
        ],
        entries,
    )
}
