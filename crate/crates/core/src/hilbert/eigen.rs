//! Spectral decomposition of complex Hermitian matrices by cyclic Jacobi
//! rotations.
//!
//! Each rotation first removes the phase of the pivot `A[p][q]` with a diagonal
//! unitary and then applies the real symmetric Jacobi rotation that zeroes it.
//! The product of all rotations accumulates into the unitary of eigenvectors.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `A = V · diag(values) · V†` with eigenvalues ascending and eigenvectors in
/// the columns of `V`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Decomposes the Hermitian part `(A + A†)/2` of `a`. Callers check
    /// Hermiticity themselves when it matters.
    pub fn new(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        let mut m = a.hermitian_part();
        let mut v = ComplexMatrix::identity(n);

        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for _ in 0..MAX_SWEEPS {
            let off = off_diagonal_norm(&m);
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let values = order.iter().map(|&i| diag[i]).collect();
        let mut vectors = ComplexMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..n {
                vectors.set(r, new_col, v.get(r, old_col));
            }
        }
        Self { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let fl = f(lambda);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors.get(i, k) * fl;
                for j in 0..n {
                    let z = out.get(i, j) + vik * self.vectors.get(j, k).conj();
                    out.set(i, j, z);
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m.get(p, q);
    let modulus = b.norm();
    if modulus == 0.0 {
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * modulus);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = (b / modulus).conj();

    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] restricted to (p, q)
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    let n = m.dim();
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * u_pp + akq * u_qp);
        m.set(k, q, akp * u_pq + akq * u_qq);

        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * u_pp + vkq * u_qp);
        v.set(k, q, vkp * u_pq + vkq * u_qq);
    }
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, u_pp.conj() * apk + u_qp.conj() * aqk);
        m.set(q, k, u_pq.conj() * apk + u_qq.conj() * aqk);
    }
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));
}

/// The unique positive semidefinite square root of a PSD matrix.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero; more negative eigenvalues
/// and Hermiticity deviations above `tol` are errors.
pub fn hermitian_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let dev = a.hermitian_deviation();
    if dev > tol {
        return Err(Error::InvalidMatrix(format!(
            "not Hermitian: max |A - A†| = {dev:e}"
        )));
    }
    let eig = HermitianEigen::new(a);
    if eig.min() < -tol {
        return Err(Error::InvalidMatrix(format!(
            "not positive semidefinite: eigenvalue {:e}",
            eig.min()
        )));
    }
    Ok(eig.map(|x| x.max(0.0).sqrt()))
}
