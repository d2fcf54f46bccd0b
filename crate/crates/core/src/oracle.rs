//! Independent checks of the analytic constructions.
//!
//! Sampling reproduces each probability as a frequency of simulated yes/no
//! outcomes, enumeration re-sums tables cell by cell, and the convexity probe
//! tests the linearity that operations are required to have.
//!
//! # Random numbers
//!
//! Every sampler owns a private generator derived from `(seed, label)`:
//! ChaCha8 keyed by `seed` through `SeedableRng::seed_from_u64`, with the
//! stream id set to the 64-bit FNV-1a hash of `label`. A shot draws
//! `u = (next_u64 >> 11) · 2⁻⁵³` and succeeds when `u < p`. The identifier
//! [`RNG_ID`] is recorded in every report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Instrument, Model};
use crate::random::{random_simplex, RandomModel};
use crate::table::{Axis, DistributionTable};
use crate::transition;

pub const RNG_ID: &str = "chacha8-seed_from_u64-fnv1a64_stream-v1";

/// Default acceptance threshold for `|z|`.
pub const Z_THRESHOLD: f64 = 5.0;

pub const DEFAULT_SHOTS: u64 = 100_000;

fn fnv1a64(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// The generator for one sampling call.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a64(label));
    rng
}

fn bernoulli_hits(rng: &mut ChaCha8Rng, p: f64, shots: u64) -> u64 {
    let mut hits = 0;
    for _ in 0..shots {
        if rng.random::<f64>() < p {
            hits += 1;
        }
    }
    hits
}

fn z_score(estimate: f64, analytic: f64, std_error: f64) -> f64 {
    let diff = (estimate - analytic).abs();
    if std_error > 0.0 {
        diff / std_error
    } else if diff < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        Err(Error::InvalidArgument("shots must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub estimate: f64,
    pub analytic: f64,
    pub std_error: f64,
    pub z_score: f64,
    pub shots: u64,
    pub seed: u64,
    pub rng_id: String,
}

impl SampleReport {
    pub fn within(&self, threshold: f64) -> bool {
        self.z_score <= threshold
    }
}

/// Estimates `s(a)` as the frequency of `a` occurring in `shots` trials.
pub fn sample_effect<M: Model>(
    s: &M::Substate,
    a: &M::Effect,
    shots: u64,
    seed: u64,
) -> Result<SampleReport> {
    check_shots(shots)?;
    let p = M::eval(s, a)?;
    let mut rng = rng_for(seed, "effect");
    let estimate = bernoulli_hits(&mut rng, p, shots) as f64 / shots as f64;
    let std_error = (estimate * (1.0 - estimate) / shots as f64).sqrt();
    Ok(SampleReport {
        estimate,
        analytic: p,
        std_error,
        z_score: z_score(estimate, p, std_error),
        shots,
        seed,
        rng_id: RNG_ID.into(),
    })
}

/// Estimates `P_{s,J}(a,b)` with two independent experiments: `a` is tested
/// in `s`, and `b` is tested in the updated state `J(s)~`. The estimate is the
/// product of the two frequencies, and its standard error is propagated to
/// first order from the two binomial errors.
pub fn sample_transition_effect<M: Model>(
    s: &M::Substate,
    op: &M::Operation,
    a: &M::Effect,
    b: &M::Effect,
    shots: u64,
    seed: u64,
    tol: f64,
) -> Result<SampleReport> {
    check_shots(shots)?;
    let analytic = transition::transition_prob_effect::<M>(s, op, a, b, tol)?;

    let p_first = M::eval(s, a)?;
    let js = M::apply(op, s)?;
    let occurs = M::total(&js);
    if occurs < tol {
        return Err(Error::TransitionUndefined {
            probability: occurs,
        });
    }
    let p_second = M::eval(&js, b)? / occurs;

    let n = shots as f64;
    let f1 = bernoulli_hits(&mut rng_for(seed, "transition/first"), p_first, shots) as f64 / n;
    let f2 = bernoulli_hits(&mut rng_for(seed, "transition/second"), p_second, shots) as f64 / n;
    let estimate = f1 * f2;
    let var1 = f1 * (1.0 - f1) / n;
    let var2 = f2 * (1.0 - f2) / n;
    let std_error = (f2 * f2 * var1 + f1 * f1 * var2).sqrt();
    Ok(SampleReport {
        estimate,
        analytic,
        std_error,
        z_score: z_score(estimate, analytic, std_error),
        shots,
        seed,
        rng_id: RNG_ID.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstrumentSample {
    pub empirical: DistributionTable,
    pub analytic: DistributionTable,
    pub counts: Vec<u64>,
    pub std_errors: Vec<f64>,
    pub z_scores: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub rng_id: String,
}

impl InstrumentSample {
    pub fn max_z(&self) -> f64 {
        self.z_scores.iter().copied().fold(0.0, f64::max)
    }
}

/// Draws `shots` outcomes of `instrument` in state `s` with probabilities
/// `I_x(s)(1)` by inverse-CDF sampling.
pub fn sample_instrument<M: Model>(
    s: &M::Substate,
    instrument: &Instrument<M>,
    shots: u64,
    seed: u64,
) -> Result<InstrumentSample> {
    check_shots(shots)?;
    let analytic = transition::instrument_distribution(s, instrument)?;
    let mut cumulative = Vec::with_capacity(instrument.len());
    let mut acc = 0.0;
    for &p in analytic.entries() {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let mut counts = vec![0u64; instrument.len()];
    let mut rng = rng_for(seed, "instrument");
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let x = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(counts.len() - 1);
        counts[x] += 1;
    }
    let n = shots as f64;
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let std_errors: Vec<f64> = freqs.iter().map(|f| (f * (1.0 - f) / n).sqrt()).collect();
    let z_scores = freqs
        .iter()
        .zip(analytic.entries())
        .zip(&std_errors)
        .map(|((f, p), se)| z_score(*f, *p, *se))
        .collect();
    let empirical =
        DistributionTable::new(vec![Axis::new("instrument", instrument.labels())], freqs)?;
    Ok(InstrumentSample {
        empirical,
        analytic,
        counts,
        std_errors,
        z_scores,
        shots,
        seed,
        rng_id: RNG_ID.into(),
    })
}

/// A marginal a table is expected to have: the values over `axes` (in that
/// order, row-major) after summing out every other axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedMarginal {
    pub axes: Vec<usize>,
    pub values: Vec<f64>,
}

impl ExpectedMarginal {
    pub fn new(axes: Vec<usize>, values: Vec<f64>) -> Self {
        Self { axes, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalCheck {
    pub axes: Vec<usize>,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub total: f64,
    pub total_passed: bool,
    /// Every marginal over a nonempty proper subset of axes, keyed by the
    /// kept axes in ascending order.
    pub subset_sums: Vec<(Vec<usize>, Vec<f64>)>,
    pub checks: Vec<MarginalCheck>,
}

impl EnumerationReport {
    pub fn passed(&self) -> bool {
        self.total_passed && self.checks.iter().all(|c| c.passed)
    }
}

/// Sums `entries` (row-major over `shape`) onto the axes in `keep` by visiting
/// every cell.
fn brute_force_marginal(entries: &[f64], shape: &[usize], keep: &[usize]) -> Vec<f64> {
    let out_len: usize = keep.iter().map(|&k| shape[k]).product();
    let mut out = vec![0.0; out_len];
    let mut strides = vec![1usize; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * shape[d + 1];
    }
    for (flat, &v) in entries.iter().enumerate() {
        let mut o = 0;
        for &k in keep {
            let coord = (flat / strides[k]) % shape[k];
            o = o * shape[k] + coord;
        }
        out[o] += v;
    }
    out
}

/// Sums the table over every subset of axes, checks the grand total is 1 and
/// compares each expected marginal within `tol`.
pub fn enumerate_check(
    table: &DistributionTable,
    expected: &[ExpectedMarginal],
    tol: f64,
) -> EnumerationReport {
    let shape = table.shape();
    let entries = table.entries();
    let total: f64 = entries.iter().sum();
    let rank = shape.len();
    let mut subset_sums = Vec::new();
    for mask in 1..(1u32 << rank) - 1 {
        let keep: Vec<usize> = (0..rank).filter(|d| mask & (1 << d) != 0).collect();
        let sums = brute_force_marginal(entries, &shape, &keep);
        subset_sums.push((keep, sums));
    }
    let checks = expected
        .iter()
        .map(|e| {
            let valid = !e.axes.is_empty() && e.axes.iter().all(|&a| a < rank);
            let max_deviation = if valid {
                let sums = brute_force_marginal(entries, &shape, &e.axes);
                if sums.len() == e.values.len() {
                    sums.iter()
                        .zip(&e.values)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                }
            } else {
                f64::INFINITY
            };
            MarginalCheck {
                axes: e.axes.clone(),
                max_deviation,
                passed: max_deviation <= tol,
            }
        })
        .collect();
    EnumerationReport {
        total,
        total_passed: (total - 1.0).abs() <= tol,
        subset_sums,
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub trials: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Checks `f(Σ λᵢsᵢ) = Σ λᵢ f(sᵢ)` on random substates and random weights with
/// `Σ λᵢ <= 1`.
pub fn convexity_probe<M, F>(
    f: F,
    dim: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ConvexityReport>
where
    M: RandomModel,
    F: Fn(&M::Substate) -> Result<M::Substate>,
{
    let mut rng = rng_for(seed, "convexity");
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials {
        let k = rng.random_range(2..=4);
        let substates: Vec<M::Substate> =
            (0..k).map(|_| M::random_substate(&mut rng, dim)).collect();
        // k + 1 simplex weights, last one dropped, so Σλ <= 1
        let lambdas = random_simplex(&mut rng, k + 1);
        let terms: Vec<(f64, &M::Substate)> = lambdas.iter().copied().zip(&substates).collect();
        let lhs = f(&M::combine(&terms)?)?;
        let images: Vec<M::Substate> = substates.iter().map(&f).collect::<Result<_>>()?;
        let image_terms: Vec<(f64, &M::Substate)> = lambdas.iter().copied().zip(&images).collect();
        let rhs = M::combine(&image_terms)?;
        max_deviation = max_deviation.max(M::distance(&lhs, &rhs)?);
    }
    Ok(ConvexityReport {
        trials,
        max_deviation,
        passed: max_deviation <= tol,
    })
}
