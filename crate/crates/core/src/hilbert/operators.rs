use num_complex::Complex64;
use serde::Serialize;

use super::eigen::HermitianEigen;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::MAX_DIM;

/// Which operator class [`validate_operator`] checks against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    /// `0 <= A <= I`.
    Effect,
    /// PSD with unit trace.
    Density,
    /// PSD with trace at most 1.
    Subdensity,
    Psd,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub kind: OperatorKind,
    pub dim: usize,
    pub hermitian_deviation: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub trace: f64,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn into_result(self, wrap: fn(String) -> Error) -> Result<()> {
        if self.failures.is_empty() {
            Ok(())
        } else {
            Err(wrap(self.failures.join("; ")))
        }
    }
}

/// Measures Hermiticity, spectrum and trace of `m` and lists every violated
/// condition for `kind`.
pub fn validate_operator(m: &ComplexMatrix, kind: OperatorKind, tol: f64) -> ValidationReport {
    let hermitian_deviation = m.hermitian_deviation();
    let eig = HermitianEigen::new(m);
    let trace = m.trace();
    let mut failures = Vec::new();
    if m.dim() > MAX_DIM {
        failures.push(format!("dimension {} exceeds {MAX_DIM}", m.dim()));
    }
    if hermitian_deviation > tol {
        failures.push(format!(
            "not Hermitian: max |A - A†| = {hermitian_deviation:e}"
        ));
    }
    if eig.min() < -tol {
        failures.push(format!("eigenvalue {} < 0", eig.min()));
    }
    match kind {
        OperatorKind::Effect => {
            if eig.max() > 1.0 + tol {
                failures.push(format!("eigenvalue {} > 1", eig.max()));
            }
        }
        OperatorKind::Density => {
            if (trace.re - 1.0).abs() > tol {
                failures.push(format!("trace {} != 1", trace.re));
            }
        }
        OperatorKind::Subdensity => {
            if trace.re > 1.0 + tol {
                failures.push(format!("trace {} > 1", trace.re));
            }
        }
        OperatorKind::Psd => {}
    }
    ValidationReport {
        kind,
        dim: m.dim(),
        hermitian_deviation,
        min_eigenvalue: eig.min(),
        max_eigenvalue: eig.max(),
        trace: trace.re,
        failures,
    }
}

/// A Hilbert space effect `0 <= A <= I`.
#[derive(Debug, Clone, PartialEq)]
pub struct QEffect {
    matrix: ComplexMatrix,
}

impl QEffect {
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        validate_operator(&matrix, OperatorKind::Effect, tol).into_result(Error::InvalidEffect)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
        }
    }

    /// The rank-one projection `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(&psi.vector, &psi.vector),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `max |C² − C|`; zero exactly for projections.
    pub fn projection_deviation(&self) -> f64 {
        (&self.matrix * &self.matrix).max_abs_diff(&self.matrix)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_deviation() < tol
    }
}

/// A positive operator with trace at most 1. It is a state (density operator in
/// the strict sense) when the trace is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// A density operator: PSD with unit trace.
    pub fn new(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        validate_operator(&matrix, OperatorKind::Density, tol)
            .into_result(Error::InvalidSubstate)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// A PSD operator with trace at most 1, as produced by operations.
    pub fn subnormalized(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        validate_operator(&matrix, OperatorKind::Subdensity, tol)
            .into_result(Error::InvalidSubstate)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_state(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// A unit vector `ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    vector: Vec<Complex64>,
}

impl PureState {
    pub fn new(vector: Vec<Complex64>, tol: f64) -> Result<Self> {
        if vector.is_empty() || vector.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(vector.len()));
        }
        if vector
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidSubstate("non-finite amplitude".into()));
        }
        let norm = norm(&vector);
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidSubstate(format!(
                "state vector has norm {norm}, expected 1"
            )));
        }
        Ok(Self { vector })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(vector: Vec<Complex64>) -> Result<Self> {
        let n = norm(&vector);
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::NormalizationOfZero);
        }
        Self::new(vector.into_iter().map(|z| z / n).collect(), 1e-12)
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut vector = vec![Complex64::new(0.0, 0.0); dim];
        vector[i] = Complex64::new(1.0, 0.0);
        Self { vector }
    }

    /// Recovers `ψ` (up to phase) from `ρ = |ψ⟩⟨ψ|` when `ρ` is a pure state.
    pub fn from_density(rho: &DensityOperator, tol: f64) -> Option<Self> {
        if !rho.is_state(tol) || (rho.purity() - 1.0).abs() > tol {
            return None;
        }
        let eig = HermitianEigen::new(rho.matrix());
        Self::normalized(eig.eigenvector(eig.dim() - 1)).ok()
    }

    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.vector
            .iter()
            .zip(&other.vector)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `⟨Aψ, ψ⟩` for Hermitian `A`.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        a.quadratic_form(&self.vector).re
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Born's rule `tr(ρA)`.
pub fn born(rho: &DensityOperator, a: &QEffect) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: a.dim(),
        });
    }
    let t = rho.matrix.trace_product(&a.matrix);
    debug_assert!(t.im.abs() < 1e-9, "tr(ρA) has imaginary part {}", t.im);
    Ok(t.re)
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_density(psi: &PureState) -> DensityOperator {
    DensityOperator {
        matrix: ComplexMatrix::outer(&psi.vector, &psi.vector),
    }
}
