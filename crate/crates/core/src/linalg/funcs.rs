use num_complex::Complex64;

use super::eigen::{eigh, Spectrum};
use super::hermitian::HermitianMatrix;
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Absolute threshold below which an eigenvalue of `spectrum` is treated as zero.
pub fn support_threshold(spectrum: &Spectrum, support_cutoff: f64) -> f64 {
    let scale = spectrum.values.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    support_cutoff * scale
}

/// `U f(Λ) U†` with support handling.
///
/// Let `c = support_cutoff · max|λ|`. Eigenvalues in `[-c, 0)` are clamped to
/// zero, as are eigenvalues at roundoff level (`|λ| ≤ 64 ε max|λ|`), so that
/// fractional powers of singular matrices stay exact. If `f(0)` is not finite
/// (negative powers, logarithms) eigenvalues `≤ c` are outside the support and
/// map to 0, which gives the pseudo-inverse convention. Otherwise `f` is
/// applied to every clamped eigenvalue. A non-finite `f(λ)` on a retained
/// eigenvalue is a [`Error::Domain`].
pub fn matrix_function(
    h: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
    support_cutoff: f64,
) -> Result<HermitianMatrix> {
    let spectrum = eigh(h)?;
    spectral_function(&spectrum, f, support_cutoff)
}

pub fn spectral_function(
    spectrum: &Spectrum,
    f: impl Fn(f64) -> f64,
    support_cutoff: f64,
) -> Result<HermitianMatrix> {
    let c = support_threshold(spectrum, support_cutoff);
    let roundoff = support_threshold(spectrum, 64.0 * f64::EPSILON);
    let singular_at_zero = !f(0.0).is_finite();
    let mut mapped = Vec::with_capacity(spectrum.dim());
    for &l in &spectrum.values {
        let x = if (-c..0.0).contains(&l) || l.abs() <= roundoff { 0.0 } else { l };
        let y = if singular_at_zero && x.abs() <= c { 0.0 } else { f(x) };
        if !y.is_finite() {
            return Err(Error::Domain { eigenvalue: l });
        }
        mapped.push(y);
    }
    Ok(spectrum.recompose_weights(&mapped))
}

/// `H^p`, pseudo-inverse on the support for `p < 0`.
pub fn matrix_power(h: &HermitianMatrix, p: f64, support_cutoff: f64) -> Result<HermitianMatrix> {
    matrix_function(h, |x| x.powf(p), support_cutoff)
}

/// Outcome of a Loewner-order comparison `A ⪯ B`.
#[derive(Debug, Clone)]
pub struct LoewnerComparison {
    pub holds: bool,
    /// Smallest eigenvalue of `B − A`.
    pub min_eigenvalue: f64,
    /// Eigenvector of `B − A` for `min_eigenvalue`, present when `holds` is false.
    pub witness: Option<Vec<Complex64>>,
}

/// Tests `A ⪯ B` (i.e. `B − A` positive semidefinite) up to `tol`.
pub fn psd_order_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<LoewnerComparison> {
    let diff = b.sub(a)?;
    let s = eigh(&diff)?;
    let min_eigenvalue = s.min();
    let holds = min_eigenvalue >= -tol;
    Ok(LoewnerComparison {
        holds,
        min_eigenvalue,
        witness: (!holds).then(|| s.vector(0)),
    })
}

/// Orthonormalizes the columns of `m` (modified Gram–Schmidt, applied twice).
///
/// Returns `None` if a column is numerically dependent on the previous ones.
pub fn orthonormal_columns(m: &CMatrix) -> Option<CMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        let original = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for u in &q {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-12 * original.max(f64::MIN_POSITIVE)) {
            return None;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        q.push(v);
    }
    Some(CMatrix::from_fn(rows, cols, |i, j| q[j][i]))
}
