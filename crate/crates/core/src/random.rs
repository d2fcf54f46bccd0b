//! Random valid instances of every model object.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::classical::{Classical, ClassicalEffect, ClassicalOperation, ClassicalSubstate};
use crate::hilbert::{ComplexMatrix, DensityOperator, HermitianEigen, PureState, QEffect};
use crate::model::{Instrument, Model, Observable};
use crate::quantum::{KrausOperation, LudersOperation, QHolevoOperation, QOperation, Quantum};

/// Outcome labels `"0"`, `"1"`, ... for generated observables and instruments.
pub fn outcome_labels(count: usize) -> Vec<String> {
    (0..count).map(|i| i.to_string()).collect()
}

pub trait RandomModel: Model + Sized {
    fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self::Substate;

    /// A state scaled by a uniform factor in `[0,1]`.
    fn random_substate<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self::Substate {
        let s = Self::random_state(rng, dim);
        let f: f64 = rng.random();
        Self::scale(&s, f).expect("scaling a valid substate")
    }

    fn random_effect<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self::Effect;

    /// A trace-nonincreasing operation, generally not a channel.
    fn random_operation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self::Operation;

    fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self::Operation;

    fn random_observable<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Observable<Self>;

    fn random_instrument<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Instrument<Self>;
}

/// Uniform point of the probability simplex.
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

const LOOSE: f64 = 1e-7;

impl RandomModel for Classical {
    fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ClassicalSubstate {
        ClassicalSubstate::new(random_simplex(rng, dim), LOOSE).expect("simplex point")
    }

    fn random_effect<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ClassicalEffect {
        ClassicalEffect::new((0..dim).map(|_| rng.random::<f64>()).collect(), 0.0)
            .expect("unit interval entries")
    }

    fn random_operation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ClassicalOperation {
        let columns: Vec<Vec<f64>> = (0..dim)
            .map(|_| {
                let f: f64 = rng.random();
                random_simplex(rng, dim)
                    .into_iter()
                    .map(|x| x * f)
                    .collect()
            })
            .collect();
        ClassicalOperation::new(transpose(&columns), LOOSE).expect("substochastic")
    }

    fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ClassicalOperation {
        let columns: Vec<Vec<f64>> = (0..dim).map(|_| random_simplex(rng, dim)).collect();
        ClassicalOperation::new(transpose(&columns), LOOSE).expect("stochastic")
    }

    fn random_observable<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Observable<Classical> {
        // each point splits its unit of weight across the outcomes
        let splits: Vec<Vec<f64>> = (0..dim).map(|_| random_simplex(rng, outcomes)).collect();
        let effects = outcome_labels(outcomes)
            .into_iter()
            .enumerate()
            .map(|(x, label)| {
                let values = splits.iter().map(|p| p[x].min(1.0)).collect();
                (label, ClassicalEffect::new(values, LOOSE).expect("split"))
            })
            .collect();
        Observable::new(effects, LOOSE).expect("splits sum to one")
    }

    fn random_instrument<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Instrument<Classical> {
        let channel = Self::random_channel(rng, dim);
        let mut parts = vec![vec![vec![0.0; dim]; dim]; outcomes];
        for (i, j) in (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))) {
            let split = random_simplex(rng, outcomes);
            for (part, p) in parts.iter_mut().zip(split) {
                part[i][j] = channel.entry(i, j) * p;
            }
        }
        let ops = outcome_labels(outcomes)
            .into_iter()
            .zip(parts)
            .map(|(label, rows)| (label, ClassicalOperation::new(rows, LOOSE).expect("part")))
            .collect();
        Instrument::new(ops, LOOSE).expect("parts sum to a channel")
    }
}

fn transpose(columns: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = columns.len();
    (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A matrix with i.i.d. standard complex Gaussian entries.
pub fn random_ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let rows = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    ComplexMatrix::from_rows(rows).expect("finite Gaussian entries")
}

/// `G G†` for a Ginibre `G`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_ginibre(rng, dim);
    (&g * &g.adjoint()).hermitian_part()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// A Haar-like unitary from Gram-Schmidt on a Ginibre matrix; columns are
/// orthonormal.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = random_ginibre(rng, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let rows = (0..dim)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    ComplexMatrix::from_rows(rows).expect("finite")
}

/// A uniformly oriented orthogonal projection of the given rank.
pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> QEffect {
    let u = random_unitary(rng, dim);
    let mut p = ComplexMatrix::zeros(dim);
    for k in 0..rank {
        let col = u.column(k);
        p = &p + &ComplexMatrix::outer(&col, &col);
    }
    QEffect::from_matrix_unchecked(p.hermitian_part())
}

/// `S^{-1/2}` for a positive definite `S`.
fn inverse_sqrt(s: &ComplexMatrix) -> ComplexMatrix {
    HermitianEigen::new(s).map(|x| 1.0 / x.sqrt())
}

/// `m` Kraus operators with `Σ Kᵢ†Kᵢ = I`.
pub fn random_kraus_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    m: usize,
) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..m).map(|_| random_ginibre(rng, dim)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for k in &raw {
        s = &s + &(&k.adjoint() * k);
    }
    let norm = inverse_sqrt(&s.hermitian_part());
    raw.iter().map(|k| k * &norm).collect()
}

impl Quantum {
    /// A random Kraus operation with `m` operators whose measured effect is a
    /// random effect.
    pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, dim: usize, m: usize) -> KrausOperation {
        let effect = <Quantum as RandomModel>::random_effect(rng, dim);
        let root = HermitianEigen::new(effect.matrix()).map(|x| x.max(0.0).sqrt());
        let kraus = random_kraus_channel(rng, dim, m)
            .iter()
            .map(|k| k * &root)
            .collect();
        KrausOperation::new(kraus, LOOSE).expect("sub-unital Kraus set")
    }

    pub fn random_luders<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> LudersOperation {
        LudersOperation::new(<Quantum as RandomModel>::random_effect(rng, dim), LOOSE)
            .expect("effect square root")
    }

    pub fn random_holevo<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QHolevoOperation {
        let a = <Quantum as RandomModel>::random_effect(rng, dim);
        let alpha = <Quantum as RandomModel>::random_state(rng, dim);
        QHolevoOperation::new(a, alpha, LOOSE).expect("state target")
    }
}

impl RandomModel for Quantum {
    fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
        let w = random_psd(rng, dim);
        let t = w.trace().re;
        DensityOperator::from_matrix_unchecked(w.scale(1.0 / t))
    }

    fn random_effect<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QEffect {
        let w = random_psd(rng, dim);
        let top = HermitianEigen::new(&w).max();
        let f: f64 = rng.random();
        QEffect::from_matrix_unchecked(w.scale(f / top))
    }

    fn random_operation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QOperation {
        match rng.random_range(0..3) {
            0 => {
                let m = rng.random_range(1..=4);
                QOperation::Kraus(Self::random_kraus(rng, dim, m))
            }
            1 => QOperation::Luders(Self::random_luders(rng, dim)),
            _ => QOperation::Holevo(Self::random_holevo(rng, dim)),
        }
    }

    fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> QOperation {
        let m = rng.random_range(1..=4);
        QOperation::Kraus(
            KrausOperation::new(random_kraus_channel(rng, dim, m), LOOSE).expect("channel"),
        )
    }

    fn random_observable<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Observable<Quantum> {
        let parts: Vec<ComplexMatrix> = (0..outcomes).map(|_| random_psd(rng, dim)).collect();
        let mut s = ComplexMatrix::zeros(dim);
        for p in &parts {
            s = &s + p;
        }
        let norm = inverse_sqrt(&s.hermitian_part());
        let effects = outcome_labels(outcomes)
            .into_iter()
            .zip(&parts)
            .map(|(label, p)| {
                let e = (&(&norm * p) * &norm).hermitian_part();
                (label, QEffect::from_matrix_unchecked(e))
            })
            .collect();
        Observable::new(effects, LOOSE).expect("normalized POVM")
    }

    fn random_instrument<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        outcomes: usize,
    ) -> Instrument<Quantum> {
        let per_outcome = rng.random_range(1..=2);
        let mut kraus = random_kraus_channel(rng, dim, outcomes * per_outcome).into_iter();
        let ops: BTreeMap<String, QOperation> = outcome_labels(outcomes)
            .into_iter()
            .map(|label| {
                let ks: Vec<ComplexMatrix> = kraus.by_ref().take(per_outcome).collect();
                (
                    label,
                    QOperation::Kraus(KrausOperation::new(ks, LOOSE).expect("part")),
                )
            })
            .collect();
        Instrument::new(ops, LOOSE).expect("Kraus parts of a channel")
    }
}
