//! Dense symmetric matrices and a cyclic Jacobi eigensolver.
//!
//! Jacobi is chosen over Lanczos/QR on purpose: the matrices here stay small
//! (a few thousand at most), and a fixed sweep order gives bit-reproducible
//! spectra across runs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fp;

/// Dense symmetric `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    /// Builds from `f(i, j)`; only `i <= j` is evaluated, the rest mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.a[i * n + j] = v;
                m.a[j * n + i] = v;
            }
        }
        m
    }

    /// Wraps a full row-major buffer, requiring near-symmetry.
    pub fn from_row_major(n: usize, a: Vec<f64>, tol: f64) -> Result<Self, Error> {
        assert_eq!(a.len(), n * n);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let d = fp::abs(a[i * n + j] - a[j * n + i]);
                if d > worst {
                    worst = d;
                }
            }
        }
        if worst > tol {
            return Err(Error::NotSymmetric(worst));
        }
        let mut m = Self { n, a };
        // exact symmetrization so downstream zero tests agree across the diagonal
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (m.a[i * n + j] + m.a[j * n + i]);
                m.a[i * n + j] = v;
                m.a[j * n + i] = v;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.a
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.a[i * self.n + i]).sum()
    }

    /// Sum of all entries.
    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        fp::sqrt(self.a.iter().map(|x| x * x).sum())
    }

    /// Sum of squared entries, i.e. `tr(M^2)` for symmetric `M`.
    pub fn sum_of_squares(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }

    pub fn add_scaled_identity(&mut self, s: f64) {
        for i in 0..self.n {
            self.a[i * self.n + i] += s;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for x in &mut self.a {
            *x *= s;
        }
    }

    /// `M x` for a vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let row = &self.a[i * n..(i + 1) * n];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }
}

/// Eigendecomposition with eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[j]` is the unit eigenvector of `values[j]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Maximum cyclic sweeps before giving up.
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps the strict upper triangle in a fixed row-major order until the
/// off-diagonal Frobenius norm drops below `1e-12 * ||M||_F`.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<Eigen, Error> {
    let n = m.n;
    let mut a = m.a.clone();
    let mut v = SymMatrix::identity(n).a;
    let norm = m.frobenius_norm();
    let target = 1e-12 * norm;

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        fp::sqrt(s)
    };

    let mut converged = norm == 0.0;
    if !converged {
        for _sweep in 0..MAX_SWEEPS {
            if off(&a) <= target {
                converged = true;
                break;
            }
            for p in 0..n.saturating_sub(1) {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + fp::hypot(1.0, theta))
                    } else {
                        -1.0 / (-theta + fp::hypot(1.0, theta))
                    };
                    let c = 1.0 / fp::hypot(1.0, t);
                    let s = t * c;
                    // rows/columns p and q of A
                    for i in 0..n {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = c * aip - s * aiq;
                        a[i * n + q] = s * aip + c * aiq;
                    }
                    for j in 0..n {
                        let apj = a[p * n + j];
                        let aqj = a[q * n + j];
                        a[p * n + j] = c * apj - s * aqj;
                        a[q * n + j] = s * apj + c * aqj;
                    }
                    // accumulate the rotation into V
                    for i in 0..n {
                        let vip = v[i * n + p];
                        let viq = v[i * n + q];
                        v[i * n + p] = c * vip - s * viq;
                        v[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
        if !converged && off(&a) <= target {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..n).map(|i| v[i * n + j]).collect())
        .collect();
    Ok(Eigen { values, vectors })
}
