//! Entropy functionals on positive operators.
//!
//! Fractional powers of `ρ` follow the support convention: eigenvalues of `ρ`
//! at or below `support_cutoff · λ_max` are treated as exact zeros, and
//! `ρ^{-1/2}` is the pseudo-inverse square root. All `ρ`-dependent work is
//! done once in a [`SupportFrame`] (the eigenbasis of `ρ` restricted to its
//! support), which then evaluates the functionals against any `σ`:
//!
//! ```text
//! X        = Λ^{-1/2} V† σ V Λ^{-1/2}              (r × r, r = rank ρ)
//! f_q      = Tr[Λ X^{1−q}]
//! T_q      = V Λ^{1/2} (X^{1−q} − I) Λ^{1/2} V† / (1 − q)
//! F        = (Tr sqrt(Λ^{1/2} V† σ V Λ^{1/2}))²
//! ```
//!
//! Zero eigenvalues of `σ` need no special care here: `X^{1−q}` is continuous
//! at 0 for `q < 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, spectral_function, support_threshold, CMatrix, HermitianMatrix, Spectrum};
use crate::states::DensityMatrix;
use crate::tolerances::Tolerances;

impl AsRef<HermitianMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self
    }
}

impl AsRef<HermitianMatrix> for DensityMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self.hermitian()
    }
}

/// Tsallis parameter `q ∈ [0, 1)` of the relative operator entropy.
///
/// `q = 0` is a valid operator parameter but lies outside the range where the
/// coherence quantifier is defined; [`EntropyParam::measure`] enforces `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EntropyParam(f64);

impl EntropyParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::ParameterOutOfRange { q, range: "[0, 1)" });
        }
        Ok(Self(q))
    }

    pub fn measure(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ParameterOutOfRange { q, range: "(0, 1)" });
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn in_measure_range(self) -> bool {
        self.0 > 0.0
    }

    fn require_measure_range(self) -> Result<()> {
        if self.in_measure_range() {
            Ok(())
        } else {
            Err(Error::ParameterOutOfRange {
                q: self.0,
                range: "(0, 1)",
            })
        }
    }
}

/// Parameter `q ∈ (0, 2] \ {1}` of the Tsallis relative α-entropy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 2.0) || q == 1.0 {
            return Err(Error::ParameterOutOfRange {
                q,
                range: "(0, 2] without 1",
            });
        }
        Ok(Self(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `ln_{1−q} x = (x^{1−q} − 1)/(1 − q)`.
pub fn deformed_log(x: f64, q: EntropyParam) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { eigenvalue: x });
    }
    let a = 1.0 - q.0;
    // expm1 keeps full precision when a·ln x is small
    Ok((a * x.ln()).exp_m1() / a)
}

/// Eigen-decomposition of a positive operator restricted to its support.
#[derive(Debug, Clone)]
pub struct SupportFrame {
    dim: usize,
    /// `d × r`, orthonormal columns spanning the support.
    basis: CMatrix,
    eigenvalues: Vec<f64>,
    sqrt_eigenvalues: Vec<f64>,
}

impl SupportFrame {
    pub fn new(rho: &HermitianMatrix) -> Result<Self> {
        Self::with_cutoff(rho, Tolerances::DEFAULT.support_cutoff)
    }

    pub fn with_cutoff(rho: &HermitianMatrix, support_cutoff: f64) -> Result<Self> {
        let s = eigh(rho)?;
        let c = support_threshold(&s, support_cutoff);
        if let Some(&neg) = s.values.iter().find(|&&l| l < -c) {
            return Err(Error::Domain { eigenvalue: neg });
        }
        let keep: Vec<usize> = (0..s.dim()).filter(|&k| s.values[k] > c).collect();
        let d = rho.dim();
        let basis = CMatrix::from_fn(d, keep.len(), |i, j| s.vectors[(i, keep[j])]);
        let eigenvalues: Vec<f64> = keep.iter().map(|&k| s.values[k]).collect();
        let sqrt_eigenvalues = eigenvalues.iter().map(|l| l.sqrt()).collect();
        Ok(Self {
            dim: d,
            basis,
            eigenvalues,
            sqrt_eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    fn check_dim(&self, sigma: &HermitianMatrix) -> Result<()> {
        if sigma.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: sigma.dim(),
            });
        }
        Ok(())
    }

    /// `V† σ V` scaled entrywise by `w_j w_k`.
    fn compress(&self, sigma: &HermitianMatrix, weights: impl Fn(usize) -> f64) -> HermitianMatrix {
        let r = self.rank();
        let compressed = sigma.congruence(&self.basis.adjoint()).expect("dimensions checked");
        HermitianMatrix::symmetrized(CMatrix::from_fn(r, r, |j, k| {
            compressed[(j, k)] * (weights(j) * weights(k))
        }))
    }

    /// Same as [`Self::compress`] for `σ = diag(p)`, without forming `σ`.
    fn compress_diagonal(&self, p: &[f64], weights: impl Fn(usize) -> f64) -> HermitianMatrix {
        let r = self.rank();
        let v = &self.basis;
        let w: Vec<f64> = (0..r).map(&weights).collect();
        let mut m = CMatrix::zeros(r, r);
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            let row = v.row(i);
            for j in 0..r {
                let a = row[j].conj() * (pi * w[j]);
                for k in j..r {
                    m[(j, k)] += a * row[k] * w[k];
                }
            }
        }
        for j in 0..r {
            for k in 0..j {
                m[(j, k)] = m[(k, j)].conj();
            }
        }
        HermitianMatrix::symmetrized(m)
    }

    fn relative_operator(&self, sigma: &HermitianMatrix) -> HermitianMatrix {
        self.compress(sigma, |j| 1.0 / self.sqrt_eigenvalues[j])
    }

    /// `Tr[Λ g(X)]` computed from the spectrum of `X`.
    fn weighted_trace(&self, x: &Spectrum, g: impl Fn(f64) -> f64) -> f64 {
        let floor = roundoff_floor(x);
        let mut total = 0.0;
        for (k, &mu) in x.values.iter().enumerate() {
            let gk = g(if mu <= floor { 0.0 } else { mu });
            if gk == 0.0 {
                continue;
            }
            let w: f64 = (0..self.rank())
                .map(|j| self.eigenvalues[j] * x.vectors[(j, k)].norm_sqr())
                .sum();
            total += w * gk;
        }
        total
    }

    pub fn f_q(&self, sigma: &HermitianMatrix, q: EntropyParam) -> Result<f64> {
        self.check_dim(sigma)?;
        if self.rank() == 0 {
            return Ok(0.0);
        }
        let a = 1.0 - q.0;
        let x = eigh(&self.relative_operator(sigma))?;
        Ok(self.weighted_trace(&x, |mu| mu.powf(a)))
    }

    /// `f_q` against the incoherent operator `diag(p)`; `p` must be nonnegative.
    pub fn f_q_diagonal(&self, p: &[f64], q: EntropyParam) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if self.rank() == 0 {
            return Ok(0.0);
        }
        let a = 1.0 - q.0;
        let x = eigh(&self.compress_diagonal(p, |j| 1.0 / self.sqrt_eigenvalues[j]))?;
        Ok(self.weighted_trace(&x, |mu| mu.powf(a)))
    }

    pub fn t_q(&self, sigma: &HermitianMatrix, q: EntropyParam) -> Result<HermitianMatrix> {
        self.check_dim(sigma)?;
        if self.rank() == 0 {
            return Ok(HermitianMatrix::zeros(self.dim));
        }
        let a = 1.0 - q.0;
        let x = eigh(&self.relative_operator(sigma))?;
        let w = spectral_function(&x, |mu| mu.powf(a) - 1.0, 0.0)?;
        // A = V Λ^{1/2}, T = A W A† / (1 − q)
        let r = self.rank();
        let lift = CMatrix::from_fn(self.dim, r, |i, j| self.basis[(i, j)] * self.sqrt_eigenvalues[j]);
        Ok(w.congruence(&lift)?.scale(1.0 / a))
    }

    pub fn fidelity(&self, sigma: &HermitianMatrix) -> Result<f64> {
        self.check_dim(sigma)?;
        if self.rank() == 0 {
            return Ok(0.0);
        }
        let m = eigh(&self.compress(sigma, |j| self.sqrt_eigenvalues[j]))?;
        Ok(root_fidelity_squared(&m))
    }

    pub fn fidelity_diagonal(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if self.rank() == 0 {
            return Ok(0.0);
        }
        let m = eigh(&self.compress_diagonal(p, |j| self.sqrt_eigenvalues[j]))?;
        Ok(root_fidelity_squared(&m))
    }
}

/// Eigenvalues at or below this are zero up to roundoff; fractional powers
/// would otherwise inflate them (`(1e-17)^{0.1} ≈ 0.02`).
fn roundoff_floor(x: &Spectrum) -> f64 {
    64.0 * f64::EPSILON * x.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn root_fidelity_squared(m: &Spectrum) -> f64 {
    let floor = roundoff_floor(m);
    let root: f64 = m.values.iter().filter(|&&mu| mu > floor).map(|&mu| mu.sqrt()).sum();
    (root * root).min(1.0)
}

/// Tsallis relative operator entropy `ρ^{1/2} ln_{1−q}(ρ^{-1/2} σ ρ^{-1/2}) ρ^{1/2}`.
///
/// Inputs need only be positive semidefinite (not normalized).
pub fn t_q_operator(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    q: EntropyParam,
) -> Result<HermitianMatrix> {
    SupportFrame::new(rho.as_ref())?.t_q(sigma.as_ref(), q)
}

/// `f_q(ρ,σ) = Tr[ρ^{1/2}(ρ^{-1/2}σρ^{-1/2})^{1−q}ρ^{1/2}] = 1 + (1−q) Tr T_q(ρ‖σ)`.
pub fn f_q(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    q: EntropyParam,
) -> Result<f64> {
    SupportFrame::new(rho.as_ref())?.f_q(sigma.as_ref(), q)
}

/// `D_q(ρ‖σ) = (f_q^{1/q} − 1)/(q − 1)`, defined for `q ∈ (0, 1)`.
pub fn d_q(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    q: EntropyParam,
) -> Result<f64> {
    q.require_measure_range()?;
    let f = f_q(rho, sigma, q)?;
    Ok(d_q_from_f(f, q.0))
}

pub(crate) fn d_q_from_f(f: f64, q: f64) -> f64 {
    (f.max(0.0).powf(1.0 / q) - 1.0) / (q - 1.0)
}

/// Lower and upper operator bounds `ρ − ρσ⁻¹ρ ⪯ T_q(ρ‖σ) ⪯ σ − ρ`, for invertible `σ`.
pub fn t_q_bounds(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let (rho, sigma) = (rho.as_ref(), sigma.as_ref());
    let s = eigh(sigma)?;
    if s.min() <= Tolerances::DEFAULT.support_cutoff * s.max().abs() {
        return Err(Error::Domain { eigenvalue: s.min() });
    }
    let inv = s.recompose(|l| 1.0 / l);
    let upper = sigma.sub(rho)?;
    let rsr = HermitianMatrix::symmetrized(&(&**rho * &*inv) * &**rho);
    let lower = rho.sub(&rsr)?;
    Ok((lower, upper))
}

/// Checks `supp ρ ⊆ supp σ` via the norm of `(I − Π_σ) Π_ρ`.
pub fn support_inclusion(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    tol: f64,
) -> Result<()> {
    let (rho, sigma) = (rho.as_ref(), sigma.as_ref());
    rho.check_same_dim(sigma)?;
    let cutoff = Tolerances::DEFAULT.support_cutoff;
    let s_sigma = eigh(sigma)?;
    let c_sigma = support_threshold(&s_sigma, cutoff);
    let null_sigma: Vec<Vec<Complex64>> = (0..s_sigma.dim())
        .filter(|&k| s_sigma.values[k] <= c_sigma)
        .map(|k| s_sigma.vector(k))
        .collect();
    if null_sigma.is_empty() {
        return Ok(());
    }
    let frame = SupportFrame::new(rho)?;
    // (I − Π_σ)Π_ρ restricted to supp ρ has Gram matrix B†B with B = N† V.
    let r = frame.rank();
    let b = CMatrix::from_fn(null_sigma.len(), r, |a, j| {
        (0..rho.dim())
            .map(|i| null_sigma[a][i].conj() * frame.basis[(i, j)])
            .sum()
    });
    let gram = HermitianMatrix::symmetrized(&b.adjoint() * &b);
    let leak = eigh(&gram)?;
    let norm = leak.max().max(0.0).sqrt();
    if norm <= tol {
        return Ok(());
    }
    let index = (0..r)
        .max_by(|&x, &y| gram[(x, x)].re.total_cmp(&gram[(y, y)].re))
        .unwrap_or(0);
    Err(Error::SupportViolation {
        index,
        eigenvalue: frame.eigenvalues[index],
        leakage: gram[(index, index)].re.max(0.0).sqrt(),
        eigenvector: frame.basis.column(index),
    })
}

/// `f̃_q(ρ,σ) = Tr ρ^q σ^{1−q}`.
pub fn tsallis_alpha_f(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    q: AlphaParam,
) -> Result<f64> {
    let (rho, sigma) = (rho.as_ref(), sigma.as_ref());
    rho.check_same_dim(sigma)?;
    let tol = Tolerances::DEFAULT;
    let q = q.0;
    if q > 1.0 {
        support_inclusion(rho, sigma, tol.support_inclusion)?;
    }
    let rho_q = spectral_function(&eigh(rho)?, |x| x.powf(q), tol.support_cutoff)?;
    let sigma_pow = spectral_function(&eigh(sigma)?, |x| x.powf(1.0 - q), tol.support_cutoff)?;
    let (re, im) = rho_q.trace_product(&sigma_pow)?;
    if im.abs() > tol.imaginary_residue * re.abs().max(1.0) {
        return Err(Error::ImaginaryResidue { residue: im });
    }
    Ok(re)
}

/// `D̃_q(ρ‖σ) = (Tr ρ^q σ^{1−q} − 1)/(q − 1)`.
pub fn tsallis_alpha_entropy(
    rho: &impl AsRef<HermitianMatrix>,
    sigma: &impl AsRef<HermitianMatrix>,
    q: AlphaParam,
) -> Result<f64> {
    Ok((tsallis_alpha_f(rho, sigma, q)? - 1.0) / (q.0 - 1.0))
}

/// Uhlmann fidelity `[Tr (ρ^{1/2} σ ρ^{1/2})^{1/2}]²`.
pub fn fidelity(rho: &impl AsRef<HermitianMatrix>, sigma: &impl AsRef<HermitianMatrix>) -> Result<f64> {
    SupportFrame::new(rho.as_ref())?.fidelity(sigma.as_ref())
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &impl AsRef<HermitianMatrix>) -> Result<f64> {
    let s = eigh(rho.as_ref())?;
    Ok(shannon_entropy(&s.values))
}

/// Shannon entropy in bits; nonpositive entries contribute nothing.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}
