//! Dense real-symmetric and complex-Hermitian matrices.
//!
//! Deliberately minimal: full row-major storage, pairwise assignment that
//! preserves (conjugate) symmetry by construction, and the linear
//! combinations needed to mix a diagonal Hamiltonian with a random
//! perturbation. Checked constructors accept raw buffers and reject input
//! that is not Hermitian to within `1e-12` (relative to the largest entry),
//! then canonicalize so downstream code sees exact symmetry.

use num_complex::Complex64;
use thiserror::Error;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("buffer of length {len} is not an {n} x {n} matrix")]
    ShapeMismatch { n: usize, len: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not symmetric: |A[{i},{j}] - A[{j},{i}]| = {dev:e}")]
    NotSymmetric { i: usize, j: usize, dev: f64 },
    #[error("matrix is not Hermitian: |A[{i},{j}] - conj(A[{j},{i}])| = {dev:e}")]
    NotHermitian { i: usize, j: usize, dev: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Real symmetric matrix, full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Validate and canonicalize a raw row-major buffer. Rejects buffers of
    /// the wrong length, non-finite entries, and asymmetry beyond
    /// `1e-12 * max(1, max|A|)`; within tolerance the matrix is symmetrized
    /// so later stages can rely on exact equality with the transpose.
    pub fn from_raw(n: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::ShapeMismatch { n, len: data.len() });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        let scale = data.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
        let mut data = data;
        for i in 0..n {
            for j in (i + 1)..n {
                let dev = (data[i * n + j] - data[j * n + i]).abs();
                if dev > SYMMETRY_TOL * scale {
                    return Err(MatrixError::NotSymmetric { i, j, dev });
                }
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Assign `A[i,j] = A[j,i] = v`.
    #[inline]
    pub fn set_pair(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Squared Frobenius norm, `sum |A_ij|^2 = Tr(A^T A)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// `c1 * self + c2 * other`.
    pub fn linear_combination(
        &self,
        c1: f64,
        other: &Self,
        c2: f64,
    ) -> Result<Self, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: other.n });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| c1 * a + c2 * b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    /// True iff the stored buffer equals its transpose bit-for-bit.
    pub fn is_exactly_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }
}

/// Complex Hermitian matrix, full row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct HermMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::ZERO; n * n] }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Validate and canonicalize a raw row-major buffer; the Hermitian
    /// counterpart of [`SymMatrix::from_raw`]. Diagonal imaginary parts are
    /// zeroed once they pass the deviation check.
    pub fn from_raw(n: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if data.len() != n * n {
            return Err(MatrixError::ShapeMismatch { n, len: data.len() });
        }
        if !data.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        let scale = data.iter().fold(0.0_f64, |m, v| m.max(v.norm())).max(1.0);
        let mut data = data;
        for i in 0..n {
            let dev = data[i * n + i].im.abs();
            if dev > SYMMETRY_TOL * scale {
                return Err(MatrixError::NotHermitian { i, j: i, dev });
            }
            data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let dev = (data[i * n + j] - data[j * n + i].conj()).norm();
                if dev > SYMMETRY_TOL * scale {
                    return Err(MatrixError::NotHermitian { i, j, dev });
                }
                let avg = 0.5 * (data[i * n + j] + data[j * n + i].conj());
                data[i * n + j] = avg;
                data[j * n + i] = avg.conj();
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Assign `A[i,j] = v` and `A[j,i] = conj(v)`; diagonal assignments keep
    /// only the real part.
    #[inline]
    pub fn set_pair(&mut self, i: usize, j: usize, v: Complex64) {
        if i == j {
            self.data[i * self.n + i] = Complex64::new(v.re, 0.0);
        } else {
            self.data[i * self.n + j] = v;
            self.data[j * self.n + i] = v.conj();
        }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    /// Squared Frobenius norm, `sum |A_ij|^2 = Tr(A^dagger A)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn linear_combination(
        &self,
        c1: f64,
        other: &Self,
        c2: f64,
    ) -> Result<Self, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch { left: self.n, right: other.n });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| c1 * a + c2 * b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    /// True iff the stored buffer equals its conjugate transpose exactly.
    pub fn is_exactly_hermitian(&self) -> bool {
        for i in 0..self.n {
            if self.get(i, i).im != 0.0 {
                return false;
            }
            for j in (i + 1)..self.n {
                if self.get(i, j) != self.get(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    /// Real-symmetric embedding `[[A, -B], [B, A]]` of `H = A + iB`.
    ///
    /// Every eigenvalue of `H` appears exactly twice in the embedding, so a
    /// real symmetric eigensolver recovers the Hermitian spectrum.
    pub fn real_embedding(&self) -> SymMatrix {
        let n = self.n;
        let mut m = SymMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                m.data[i * 2 * n + j] = z.re;
                m.data[(i + n) * 2 * n + (j + n)] = z.re;
                m.data[i * 2 * n + (j + n)] = -z.im;
                m.data[(i + n) * 2 * n + j] = z.im;
            }
        }
        m
    }
}
