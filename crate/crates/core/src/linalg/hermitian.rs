use std::ops::Deref;

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Square complex matrix equal to its adjoint.
///
/// Construction checks the deviation from self-adjointness against
/// [`Tolerances::hermitian`] and then symmetrizes, so the stored entries are
/// exactly Hermitian with a real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::DEFAULT.hermitian)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if let Some((row, col)) = m.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        let n = m.rows();
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if deviation > tol * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(m))
    }

    /// Averages `m` with its adjoint without checking; for products that are
    /// Hermitian in exact arithmetic.
    pub(crate) fn symmetrized(mut m: CMatrix) -> Self {
        let n = m.rows();
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self(CMatrix::from_diagonal(&d))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace_real(&self) -> f64 {
        (0..self.dim()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    /// `a · self · a†`, Hermitian for any (possibly rectangular) `a`.
    pub fn congruence(&self, a: &CMatrix) -> Result<Self> {
        Ok(Self::symmetrized(a.conjugate(&self.0)?))
    }

    pub fn direct_sum(&self, other: &HermitianMatrix) -> Self {
        Self(self.0.direct_sum(&other.0))
    }

    /// Real part of `Tr(self · other)` together with its imaginary residue.
    pub fn trace_product(&self, other: &HermitianMatrix) -> Result<(f64, f64)> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        Ok((acc.re, acc.im))
    }

    pub(crate) fn check_same_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Deref for HermitianMatrix {
    type Target = CMatrix;

    fn deref(&self) -> &CMatrix {
        &self.0
    }
}
