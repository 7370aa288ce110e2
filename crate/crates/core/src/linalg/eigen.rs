//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so a single
//! 2x2 unitary `G` annihilates `a_pq` in `G† A G`. Desk-scale dimensions make
//! the O(n³) per sweep cost irrelevant, and the method is deterministic and
//! accurate for small eigenvalues.

use num_complex::Complex64;

use super::hermitian::HermitianMatrix;
use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Eigenvalues in ascending order with the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `U diag(g(λ)) U†`.
    pub fn recompose(&self, g: impl Fn(f64) -> f64) -> HermitianMatrix {
        self.recompose_weights(&self.values.iter().map(|&l| g(l)).collect::<Vec<_>>())
    }

    /// `U diag(w) U†`; `weights` follow the order of `values`.
    pub fn recompose_weights(&self, weights: &[f64]) -> HermitianMatrix {
        let n = self.dim();
        assert_eq!(weights.len(), n, "one weight per eigenvalue");
        let u = &self.vectors;
        let m = CMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * w;
                }
            }
            acc
        });
        HermitianMatrix::symmetrized(m)
    }
}

pub fn eigh(h: &HermitianMatrix) -> Result<Spectrum> {
    eigh_with_sweeps(h, Tolerances::DEFAULT.max_sweeps)
}

pub fn eigh_with_sweeps(h: &HermitianMatrix, max_sweeps: usize) -> Result<Spectrum> {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = CMatrix::identity(n);
    let norm = a.frobenius_norm();

    let mut converged = false;
    let mut residual = off_diagonal_norm(&a);
    for _ in 0..max_sweeps {
        if residual <= f64::EPSILON * norm {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, p, q);
            }
        }
        residual = off_diagonal_norm(&a);
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged && residual > f64::EPSILON * norm {
        return Err(Error::EigenNonConvergence {
            sweeps: max_sweeps,
            residual,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[(p, q)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Annihilates `a[(p, q)]`; returns false when the pivot is already negligible.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) -> bool {
    let z = a[(p, q)];
    let r = z.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r == 0.0 || (app.abs() + r * 1e2 == app.abs() && aqq.abs() + r * 1e2 == aqq.abs()) {
        if r != 0.0 {
            a[(p, q)] = Complex64::new(0.0, 0.0);
            a[(q, p)] = Complex64::new(0.0, 0.0);
        }
        return false;
    }
    let phase = (z / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = diag(1, phase) · [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{ginibre, trial_rng};

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let mut rng = trial_rng(seed, 0);
        let g = ginibre(n, n, &mut rng);
        HermitianMatrix::symmetrized(&g + &g.adjoint())
    }

    fn check_invariants(h: &HermitianMatrix, s: &Spectrum) {
        let recon = s.recompose(|x| x);
        let scale = h.max_abs().max(1.0);
        assert!(recon.max_abs_diff(h) <= 1e-10 * scale, "reconstruction");
        let utu = &s.vectors.adjoint() * &s.vectors;
        assert!(utu.max_abs_diff(&CMatrix::identity(h.dim())) <= 1e-10, "unitarity");
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]), "ascending");
    }

    #[test]
    fn identity_spectrum() {
        let s = eigh(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = eigh(&x).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-15);
        assert!((s.values[1] - 1.0).abs() < 1e-15);
        check_invariants(&x, &s);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = HermitianMatrix::new(
            CMatrix::from_rows(&[
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
                vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let s = eigh(&y).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-15 && (s.values[1] - 1.0).abs() < 1e-15);
        check_invariants(&y, &s);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..20 {
            for n in [1, 2, 3, 5, 8] {
                let h = random_hermitian(n, seed);
                let s = eigh(&h).unwrap();
                check_invariants(&h, &s);
            }
        }
    }

    #[test]
    fn zero_matrix() {
        let s = eigh(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }

    #[test]
    fn degenerate_and_wide_range() {
        let h = HermitianMatrix::from_real_diagonal(&[1e-14, 1.0, 1.0, 1e6]);
        let s = eigh(&h).unwrap();
        assert_eq!(s.values, vec![1e-14, 1.0, 1.0, 1e6]);
    }

    #[test]
    fn zero_sweeps_reports_residual() {
        let h = random_hermitian(4, 3);
        match eigh_with_sweeps(&h, 0) {
            Err(Error::EigenNonConvergence { sweeps, residual }) => {
                assert_eq!(sweeps, 0);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
