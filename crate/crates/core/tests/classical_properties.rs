use std::collections::BTreeMap;

use proptest::prelude::*;
use qtrans_core::classical::{holevo_instrument, holevo_mixed, holevo_pure};
use qtrans_core::random::RandomModel;
use qtrans_core::transition::{
    instrument_distribution, instrument_joint_distribution, instrument_state_transition,
    joint_effect_distribution, observable_distribution, transition_prob_effect,
    transition_prob_state,
};
use qtrans_core::{
    Classical, ClassicalEffect, ClassicalOperation, ClassicalSubstate, Error, Instrument, Model,
    Observable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

// Reference arithmetic on plain vectors, kept apart from the library.

fn dot(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(x, y)| x * y).sum()
}

fn matvec(m: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, w)).collect()
}

fn col_sums(m: &[Vec<f64>]) -> Vec<f64> {
    (0..m.len()).map(|j| m.iter().map(|r| r[j]).sum()).collect()
}

fn reference_tp_effect(s: &[f64], m: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    let js = matvec(m, s);
    let occurs: f64 = js.iter().sum();
    dot(s, a) * dot(&js, b) / occurs
}

fn reference_tp_state(m: &[Vec<f64>], s1: &[f64], s2: &[f64]) -> f64 {
    let once: f64 = matvec(m, s1).iter().sum();
    let twice: f64 = matvec(m, &matvec(m, s2)).iter().sum();
    once * twice
}

fn effect_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, 3)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn effect(v: Vec<f64>) -> ClassicalEffect {
    ClassicalEffect::new(v, TOL).unwrap()
}

proptest! {
    #[test]
    fn oplus_commutes(a in effect_values(), b in effect_values()) {
        let (a, b) = (effect(a), effect(b));
        let ab = a.oplus(&b, TOL).unwrap();
        let ba = b.oplus(&a, TOL).unwrap();
        match (ab, ba) {
            (Some(x), Some(y)) => prop_assert!(x.max_deviation(&y).unwrap() < 1e-15),
            (None, None) => {}
            _ => prop_assert!(false, "definedness differs"),
        }
    }

    #[test]
    fn oplus_associates(a in effect_values(), b in effect_values(), c in effect_values()) {
        let (a, b, c) = (effect(a), effect(b), effect(c));
        if let Some(bc) = b.oplus(&c, TOL).unwrap() {
            if let Some(left) = a.oplus(&bc, TOL).unwrap() {
                let ab = a.oplus(&b, TOL).unwrap();
                prop_assert!(ab.is_some());
                let right = ab.unwrap().oplus(&c, TOL).unwrap();
                prop_assert!(right.is_some());
                prop_assert!(left.max_deviation(&right.unwrap()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn complement_is_unique(a in effect_values(), b in effect_values()) {
        let a = effect(a);
        let unit = ClassicalEffect::unit(3);
        let sum = a.oplus(&a.complement(), TOL).unwrap().unwrap();
        prop_assert!(sum.max_deviation(&unit).unwrap() < 1e-15);
        let b = effect(b);
        if let Some(s) = a.oplus(&b, TOL).unwrap() {
            if s.max_deviation(&unit).unwrap() < 1e-12 {
                prop_assert!(b.max_deviation(&a.complement()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn only_zero_is_orthogonal_to_unit(a in effect_values()) {
        let a = effect(a);
        let defined = a.oplus(&ClassicalEffect::unit(3), 0.0).unwrap().is_some();
        let is_zero = a.values().iter().all(|&v| v == 0.0);
        prop_assert_eq!(defined, is_zero);
    }

    #[test]
    fn states_are_additive(seed in any::<u64>(), a in effect_values(), b in effect_values()) {
        let s = Classical::random_substate(&mut rng(seed), 3);
        let (a, b) = (effect(a), effect(b));
        if let Some(ab) = a.oplus(&b, TOL).unwrap() {
            let lhs = s.eval(&ab).unwrap();
            prop_assert!((lhs - s.eval(&a).unwrap() - s.eval(&b).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluation_matches_dot_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Classical::random_substate(&mut r, 4);
        let a = Classical::random_effect(&mut r, 4);
        prop_assert!((s.eval(&a).unwrap() - dot(s.weights(), a.values())).abs() < 1e-15);
    }

    #[test]
    fn composition_is_sequential_application(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j1 = Classical::random_operation(&mut r, 4);
        let j2 = Classical::random_operation(&mut r, 4);
        let s = Classical::random_substate(&mut r, 4);
        let composed = j1.compose(&j2).unwrap().apply(&s).unwrap();
        let expected = matvec(&j1.rows(), &matvec(&j2.rows(), s.weights()));
        for (x, y) in composed.weights().iter().zip(&expected) {
            prop_assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn measured_effect_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = Classical::random_operation(&mut r, 4);
        let hat = j.measured_effect();
        for i in 0..4 {
            let s = ClassicalSubstate::point(4, i);
            let occurs = j.apply(&s).unwrap().total();
            prop_assert!((s.eval(&hat).unwrap() - occurs).abs() < 1e-12);
        }
        prop_assert!(hat.max_deviation(&effect_or_panic(col_sums(&j.rows()))).unwrap() < 1e-15);
    }

    #[test]
    fn transition_prob_effect_matches_reference(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Classical::random_state(&mut r, 3);
        let j = Classical::random_operation(&mut r, 3);
        let a = Classical::random_effect(&mut r, 3);
        let b = Classical::random_effect(&mut r, 3);
        let rows = j.rows();
        prop_assume!(matvec(&rows, s.weights()).iter().sum::<f64>() > 1e-6);
        let p = transition_prob_effect::<Classical>(&s, &j, &a, &b, TOL).unwrap();
        let q = reference_tp_effect(s.weights(), &rows, a.values(), b.values());
        prop_assert!((p - q).abs() < 1e-12);
        let unit = ClassicalEffect::unit(3);
        let pa1 = transition_prob_effect::<Classical>(&s, &j, &a, &unit, TOL).unwrap();
        prop_assert!((pa1 - s.eval(&a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn transition_prob_state_matches_reference(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = Classical::random_operation(&mut r, 3);
        let s1 = Classical::random_state(&mut r, 3);
        let s2 = Classical::random_state(&mut r, 3);
        let p = transition_prob_state::<Classical>(&j, &s1, &s2).unwrap();
        let q = reference_tp_state(&j.rows(), s1.weights(), s2.weights());
        prop_assert!((p - q).abs() < 1e-12);
    }

    #[test]
    fn state_transition_factors_through_measured_effect(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = Classical::random_operation(&mut r, 4);
        let s1 = Classical::random_state(&mut r, 4);
        let s2 = Classical::random_state(&mut r, 4);
        let js1 = j.apply(&s1).unwrap();
        let js2 = j.apply(&s2).unwrap();
        prop_assume!(js1.total() >= 1e-6 && js2.total() >= 1e-6);
        let hat = j.measured_effect();
        let unit = ClassicalEffect::unit(4);
        let lhs = transition_prob_state::<Classical>(&j, &s1, &s2).unwrap();
        let rhs = transition_prob_effect::<Classical>(&s1, &j, &hat, &unit, TOL).unwrap()
            * transition_prob_effect::<Classical>(&js2, &j, &hat, &unit, TOL).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn joint_effect_table_marginals(seed in any::<u64>(), na in 2usize..=4, nb in 2usize..=4) {
        let mut r = rng(seed);
        let s = Classical::random_state(&mut r, 3);
        let j = Classical::random_operation(&mut r, 3);
        let a = Classical::random_observable(&mut r, 3, na);
        let b = Classical::random_observable(&mut r, 3, nb);
        let js = matvec(&j.rows(), s.weights());
        let occurs: f64 = js.iter().sum();
        prop_assume!(occurs >= 1e-6);
        let t = joint_effect_distribution(&s, &j, &a, &b, TOL).unwrap();
        prop_assert!((t.total() - 1.0).abs() < 1e-10);
        for (x, (_, ax)) in a.iter().enumerate() {
            let row: f64 = (0..nb).map(|y| t.get(&[x, y]).unwrap()).sum();
            prop_assert!((row - dot(s.weights(), ax.values())).abs() < 1e-10);
        }
        for (y, (_, by)) in b.iter().enumerate() {
            let col: f64 = (0..na).map(|x| t.get(&[x, y]).unwrap()).sum();
            prop_assert!((col - dot(&js, by.values()) / occurs).abs() < 1e-10);
        }
    }

    #[test]
    fn q_measure_marginals(seed in any::<u64>(), ni in 1usize..=3, na in 2usize..=3, nb in 2usize..=3) {
        let mut r = rng(seed);
        let s = Classical::random_state(&mut r, 3);
        let inst = Classical::random_instrument(&mut r, 3, ni);
        let a = Classical::random_observable(&mut r, 3, na);
        let b = Classical::random_observable(&mut r, 3, nb);
        let q = instrument_joint_distribution(&s, &inst, &a, &b).unwrap();
        prop_assert!((q.total() - 1.0).abs() < 1e-10);

        let sum_rows: Vec<Vec<f64>> = {
            let mats: Vec<Vec<Vec<f64>>> = inst.iter().map(|(_, op)| op.rows()).collect();
            (0..3).map(|i| (0..3).map(|k| mats.iter().map(|m| m[i][k]).sum()).collect()).collect()
        };
        let bar_s = matvec(&sum_rows, s.weights());
        for (z, (_, op)) in inst.iter().enumerate() {
            let m: f64 = (0..na).flat_map(|x| (0..nb).map(move |y| (x, y)))
                .map(|(x, y)| q.get(&[z, x, y]).unwrap()).sum();
            prop_assert!((m - matvec(&op.rows(), s.weights()).iter().sum::<f64>()).abs() < 1e-10);
        }
        for (x, (_, ax)) in a.iter().enumerate() {
            let m: f64 = (0..ni).flat_map(|z| (0..nb).map(move |y| (z, y)))
                .map(|(z, y)| q.get(&[z, x, y]).unwrap()).sum();
            prop_assert!((m - dot(s.weights(), ax.values())).abs() < 1e-10);
        }
        for (y, (_, by)) in b.iter().enumerate() {
            let m: f64 = (0..ni).flat_map(|z| (0..na).map(move |x| (z, x)))
                .map(|(z, x)| q.get(&[z, x, y]).unwrap()).sum();
            prop_assert!((m - dot(&bar_s, by.values())).abs() < 1e-10);
        }
    }

    #[test]
    fn instrument_state_transition_is_a_measure(seed in any::<u64>(), ni in 1usize..=4) {
        let mut r = rng(seed);
        let inst = Classical::random_instrument(&mut r, 3, ni);
        let s1 = Classical::random_state(&mut r, 3);
        let s2 = Classical::random_state(&mut r, 3);
        let t = instrument_state_transition(&inst, &s1, &s2).unwrap();
        prop_assert!((t.total() - 1.0).abs() < 1e-10);
        prop_assert!(t.min_entry() >= 0.0);
    }

    #[test]
    fn repeatable_operations_are_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        // either a 0/1 diagonal or a Holevo operation with α(a) = 1
        let p = if r.random_bool(0.5) {
            let keep = [true, r.random_bool(0.5), false];
            let rows: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| if i == j && keep[i] { 1.0 } else { 0.0 }).collect())
                .collect();
            ClassicalOperation::new(rows, TOL).unwrap()
        } else {
            let w: f64 = r.random();
            let alpha = ClassicalSubstate::state(vec![w, 1.0 - w, 0.0], TOL).unwrap();
            let a = effect(vec![1.0, 1.0, r.random()]);
            holevo_pure(&a, &alpha, TOL).unwrap()
        };
        let s1 = Classical::random_state(&mut r, 3);
        let s2 = Classical::random_state(&mut r, 3);
        let forward = transition_prob_state::<Classical>(&p, &s1, &s2).unwrap();
        let backward = transition_prob_state::<Classical>(&p, &s2, &s1).unwrap();
        prop_assert!((forward - backward).abs() < 1e-10);
    }

    #[test]
    fn holevo_closed_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Classical::random_effect(&mut r, 3);
        let alpha = Classical::random_state(&mut r, 3);
        let h = holevo_pure(&a, &alpha, TOL).unwrap();
        let s = Classical::random_state(&mut r, 3);
        let b = Classical::random_effect(&mut r, 3);
        let c = Classical::random_effect(&mut r, 3);
        prop_assume!(dot(s.weights(), a.values()) >= 1e-6);
        let generic = transition_prob_effect::<Classical>(&s, &h, &b, &c, TOL).unwrap();
        let closed = dot(s.weights(), b.values()) * dot(alpha.weights(), c.values());
        prop_assert!((generic - closed).abs() < 1e-12);

        let s2 = Classical::random_state(&mut r, 3);
        let generic = transition_prob_state::<Classical>(&h, &s, &s2).unwrap();
        let closed = dot(s.weights(), a.values())
            * dot(s2.weights(), a.values())
            * dot(alpha.weights(), a.values());
        prop_assert!((generic - closed).abs() < 1e-12);
        prop_assert!(h.measured_effect().max_deviation(&a).unwrap() < 1e-15);
    }

    #[test]
    fn holevo_repeatability(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Classical::random_effect(&mut r, 3);
        let alpha = Classical::random_state(&mut r, 3);
        let h = holevo_pure(&a, &alpha, TOL).unwrap();
        let alpha_a = dot(alpha.weights(), a.values());
        prop_assume!((alpha_a - 1.0).abs() > 1e-6);
        prop_assert!(!h.is_repeatable(1e-12));
    }

    #[test]
    fn holevo_instrument_measures_its_observable(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let obs = Classical::random_observable(&mut r, 3, n);
        let alphas: BTreeMap<String, ClassicalSubstate> = obs
            .labels()
            .into_iter()
            .map(|l| (l, Classical::random_state(&mut r, 3)))
            .collect();
        let inst = holevo_instrument(&obs, &alphas, TOL).unwrap();
        let mixed = holevo_mixed(&obs, &alphas, TOL).unwrap();
        prop_assert!(mixed.is_channel(1e-12));
        let s = Classical::random_state(&mut r, 3);
        let phi_i = instrument_distribution(&s, &inst).unwrap();
        let phi_a = observable_distribution(&s, &obs).unwrap();
        prop_assert!(phi_i.max_deviation(&phi_a).unwrap() < 1e-12);

        let s2 = Classical::random_state(&mut r, 3);
        let table = instrument_state_transition(&inst, &s, &s2).unwrap();
        prop_assert!((table.total() - 1.0).abs() < 1e-12);
    }
}

fn effect_or_panic(v: Vec<f64>) -> ClassicalEffect {
    ClassicalEffect::new(v, 1e-9).unwrap()
}

#[test]
fn dimension_mismatch_is_not_undefined() {
    let a = ClassicalEffect::unit(2);
    let b = ClassicalEffect::unit(3);
    assert!(matches!(
        a.oplus(&b, TOL),
        Err(Error::DimensionMismatch { .. })
    ));
    assert_eq!(a.oplus(&a, TOL), Ok(None));
}

#[test]
fn identity_joint_table_is_a_product() {
    let s = ClassicalSubstate::state(vec![1.0, 0.0], TOL).unwrap();
    let points = Observable::<Classical>::new(
        BTreeMap::from([
            ("0".to_string(), ClassicalEffect::point(2, 0)),
            ("1".to_string(), ClassicalEffect::point(2, 1)),
        ]),
        TOL,
    )
    .unwrap();
    let t = joint_effect_distribution(&s, &ClassicalOperation::identity(2), &points, &points, TOL)
        .unwrap();
    assert_eq!(t.entries(), &[1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn holevo_diagonal_of_instrument_state_transition() {
    let obs = Observable::<Classical>::new(
        BTreeMap::from([
            (
                "x".to_string(),
                ClassicalEffect::new(vec![0.9, 0.2], TOL).unwrap(),
            ),
            (
                "y".to_string(),
                ClassicalEffect::new(vec![0.1, 0.8], TOL).unwrap(),
            ),
        ]),
        TOL,
    )
    .unwrap();
    let alphas = BTreeMap::from([
        (
            "x".to_string(),
            ClassicalSubstate::state(vec![0.7, 0.3], TOL).unwrap(),
        ),
        (
            "y".to_string(),
            ClassicalSubstate::state(vec![0.4, 0.6], TOL).unwrap(),
        ),
    ]);
    let inst = holevo_instrument(&obs, &alphas, TOL).unwrap();
    let s1 = ClassicalSubstate::state(vec![0.25, 0.75], TOL).unwrap();
    let s2 = ClassicalSubstate::state(vec![0.6, 0.4], TOL).unwrap();
    // the per-operation P_{H_x}(s1,s2) equals s1(A_x)s2(A_x)α_x(A_x)
    for label in ["x", "y"] {
        let op = inst.operation(label).unwrap();
        let ax = obs.effect(label).unwrap();
        let closed = dot(s1.weights(), ax.values())
            * dot(s2.weights(), ax.values())
            * dot(alphas[label].weights(), ax.values());
        let p = transition_prob_state::<Classical>(op, &s1, &s2).unwrap();
        assert!((p - closed).abs() < 1e-12, "{label}: {p} vs {closed}");
    }
    let single = Instrument::<Classical>::new(
        BTreeMap::from([("only".to_string(), ClassicalOperation::identity(2))]),
        TOL,
    )
    .unwrap();
    let t = instrument_state_transition(&single, &s1, &s2).unwrap();
    assert_eq!(t.entries(), &[1.0]);
}

#[test]
fn channels_have_unit_state_transition() {
    let mut r = rng(11);
    for _ in 0..20 {
        let j = Classical::random_channel(&mut r, 4);
        let s1 = Classical::random_state(&mut r, 4);
        let s2 = Classical::random_state(&mut r, 4);
        let p = transition_prob_state::<Classical>(&j, &s1, &s2).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!(Classical::is_channel(&j, 1e-12).unwrap());
    }
}
