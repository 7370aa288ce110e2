//! Density matrices, incoherent states and the standard state constructors.
//!
//! Incoherence is always relative to the computational basis `{|i⟩}`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, HermitianMatrix};
use crate::sampling::{ginibre, trial_rng};
use crate::tolerances::Tolerances;

/// Positive semidefinite Hermitian matrix with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        let trace = h.trace_real();
        if (trace - 1.0).abs() > tol.density_trace {
            return Err(Error::InvalidTrace { trace });
        }
        let min_eigenvalue = eigh(&h)?.min();
        if min_eigenvalue < -tol.density_psd {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self(h))
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Divides a nonzero positive semidefinite matrix by its trace.
    pub fn normalized(h: HermitianMatrix) -> Result<Self> {
        let t = h.trace_real();
        if !(t > 0.0) {
            return Err(Error::InvalidTrace { trace: t });
        }
        Self::new(h.scale(1.0 / t))
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        Self::new(HermitianMatrix::symmetrized(CMatrix::outer(psi).scale_real(1.0 / norm2)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianMatrix::from_real_diagonal(&vec![1.0 / d as f64; d]))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.as_matrix()
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).map(|(re, _)| re).unwrap_or(f64::NAN)
    }

    /// Diagonal in the reference basis, i.e. the fully dephased state.
    pub fn dephase(&self) -> DiagonalState {
        let diag: Vec<f64> = self.0.diagonal().into_iter().map(|x| x.max(0.0)).collect();
        DiagonalState::from_weights(&diag).expect("density matrix has positive diagonal mass")
    }

    pub fn is_incoherent(&self, tol: f64) -> bool {
        is_incoherent(self, tol)
    }

    /// `Σ w_i ρ_i`; weights must form a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidArgument("weights and states differ in length".into()));
        }
        DiagonalState::new(weights.to_vec())?;
        let d = states[0].dim();
        let mut acc = HermitianMatrix::zeros(d);
        for (w, s) in weights.iter().zip(states) {
            acc = acc.add(&s.0.scale(*w))?;
        }
        Self::new(acc)
    }

    pub fn to_state_file(&self) -> StateFile {
        let n = self.dim();
        let m = self.matrix();
        StateFile {
            dim: n,
            // `+ 0.0` turns −0.0 into 0.0
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re + 0.0).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im + 0.0).collect()).collect(),
        }
    }

    /// Parses the JSON state format. Shape and syntax problems are
    /// [`Error::MalformedState`]; a well-formed matrix that is not a density
    /// matrix yields the corresponding invariant error.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(s).map_err(|e| Error::MalformedState(e.to_string()))?;
        file.into_density()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_state_file()).expect("state serializes")
    }
}

/// On-disk state: `{"dim": d, "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn into_density(self) -> Result<DensityMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::MalformedState("dim must be positive".into()));
        }
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::MalformedState(format!("re/im must both be {d}x{d}")));
        }
        let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        if m.first_non_finite().is_some() {
            return Err(Error::MalformedState("non-finite entry".into()));
        }
        DensityMatrix::from_matrix(m)
    }
}

/// Probability vector `p`, standing for the incoherent state `Σ p_i |i⟩⟨i|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalState {
    probs: Vec<f64>,
}

impl DiagonalState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidProbabilities(format!("entry {p} is not a probability")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > Tolerances::DEFAULT.probability_sum {
            return Err(Error::InvalidProbabilities(format!("sum is {s}")));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0) || w.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidProbabilities("weights must be nonnegative with positive sum".into()));
        }
        Self::new(w.iter().map(|x| x / s).collect())
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            probs: vec![1.0 / d as f64; d],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&self.probs)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(self.to_hermitian())
    }
}

/// Bloch coordinates of a qubit, `ρ = (I + c₁X + c₂Y + c₃Z)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BlochVector {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let v = Self { c1, c2, c3 };
        let norm = v.norm();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(Error::InvalidBloch { norm });
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }
}

pub fn density_from_bloch(c: BlochVector) -> Result<DensityMatrix> {
    let c = BlochVector::new(c.c1, c.c2, c.c3)?;
    let m = CMatrix::from_rows(&[
        vec![Complex64::new((1.0 + c.c3) / 2.0, 0.0), Complex64::new(c.c1 / 2.0, -c.c2 / 2.0)],
        vec![Complex64::new(c.c1 / 2.0, c.c2 / 2.0), Complex64::new((1.0 - c.c3) / 2.0, 0.0)],
    ])?;
    DensityMatrix::from_matrix(m)
}

/// Projector onto `d^{-1/2} Σ_j e^{iφ_j} |j⟩`.
pub fn maximally_coherent(d: usize, phases: &[f64]) -> Result<DensityMatrix> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if phases.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: phases.len(),
        });
    }
    let amp = 1.0 / (d as f64).sqrt();
    let psi: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(amp, p)).collect();
    DensityMatrix::pure(&psi)
}

/// `G G† / Tr(G G†)` for a `d × rank` complex Ginibre matrix drawn from `seed`.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(d, rank, &mut trial_rng(seed, 0))
}

pub fn random_density_with<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d < 1 || rank < 1 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} out of range 1..={d}")));
    }
    let g = ginibre(d, rank, rng);
    DensityMatrix::normalized(HermitianMatrix::symmetrized(&g * &g.adjoint()))
}

/// True iff every off-diagonal modulus is at most `tol`.
pub fn is_incoherent(rho: &DensityMatrix, tol: f64) -> bool {
    let n = rho.dim();
    let m = rho.matrix();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= tol))
}

/// `p ρ₁ ⊕ (1−p) ρ₂`.
pub fn block_diag(p: f64, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("weight {p} outside [0, 1]")));
    }
    let h = rho1.0.scale(p).direct_sum(&rho2.0.scale(1.0 - p));
    DensityMatrix::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bloch_poles_and_center() {
        let n = density_from_bloch(BlochVector::new(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert!(n.matrix().max_abs_diff(&CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap()) < 1e-15);
        let c = density_from_bloch(BlochVector::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(c, DensityMatrix::maximally_mixed(2));
    }

    #[test]
    fn bloch_eigenvalues() {
        for (c1, c2, c3) in [(0.3, -0.2, 0.5), (0.6, 0.0, 0.8), (0.0, 0.1, 0.0)] {
            let v = BlochVector::new(c1, c2, c3).unwrap();
            let s = eigh(density_from_bloch(v).unwrap().hermitian()).unwrap();
            let r = v.norm();
            assert!((s.values[0] - (1.0 - r) / 2.0).abs() < 1e-10);
            assert!((s.values[1] - (1.0 + r) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bloch_out_of_ball() {
        assert!(matches!(BlochVector::new(1.0, 0.1, 0.0), Err(Error::InvalidBloch { .. })));
    }

    #[test]
    fn maximally_coherent_entries() {
        let r = maximally_coherent(3, &[0.0; 3]).unwrap();
        assert!(r.matrix().as_slice().iter().all(|z| (z - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15));
        let r = maximally_coherent(2, &[0.0, PI]).unwrap();
        let expected = CMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(r.matrix().max_abs_diff(&expected) < 1e-15);
        assert!(maximally_coherent(0, &[]).is_err());
        assert!(maximally_coherent(2, &[0.0]).is_err());
    }

    #[test]
    fn random_density_properties() {
        let pure = random_density(2, 1, 11).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let full = random_density(4, 4, 11).unwrap();
        assert!(eigh(full.hermitian()).unwrap().min() > 0.0);
        assert_eq!(random_density(4, 2, 5).unwrap(), random_density(4, 2, 5).unwrap());
        assert!(random_density(3, 4, 0).is_err());
        assert!(random_density(3, 0, 0).is_err());
    }

    #[test]
    fn incoherence_checks() {
        assert!(DiagonalState::new(vec![0.2, 0.8]).unwrap().to_density().is_incoherent(0.0));
        assert!(!maximally_coherent(2, &[0.0, 0.0]).unwrap().is_incoherent(1e-9));
        let rho = random_density(3, 3, 2).unwrap();
        assert!(rho.dephase().to_density().is_incoherent(0.0));
    }

    #[test]
    fn block_diag_layout() {
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(2, 1, 2).unwrap();
        let m = block_diag(1.0, &a, &b).unwrap();
        assert!(m.matrix()[(2, 2)].norm() == 0.0 && m.matrix()[(3, 3)].norm() == 0.0);
        let m = block_diag(0.0, &a, &b).unwrap();
        assert!(m.matrix()[(0, 0)].norm() == 0.0);
        let m = block_diag(0.5, &a, &b).unwrap();
        assert!((m.hermitian().trace_real() - 1.0).abs() < 1e-14);
        assert_eq!(m.matrix()[(0, 3)], Complex64::new(0.0, 0.0));
        assert!(block_diag(1.5, &a, &b).is_err());
    }

    #[test]
    fn rejects_non_density() {
        let h = HermitianMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(h), Err(Error::NotPositive { .. })));
        let h = HermitianMatrix::from_real_diagonal(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(h), Err(Error::InvalidTrace { .. })));
    }

    #[test]
    fn diagonal_state_validation() {
        assert!(DiagonalState::new(vec![0.5, 0.5]).is_ok());
        assert!(DiagonalState::new(vec![-0.1, 1.1]).is_err());
        assert!(DiagonalState::new(vec![0.5, 0.6]).is_err());
        assert!(DiagonalState::new(vec![]).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let rho = random_density(3, 2, 4).unwrap();
        let back = DensityMatrix::from_json_str(&rho.to_json_string()).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        assert!(matches!(
            DensityMatrix::from_json_str("{\"dim\": 2, \"re\": [[1]], \"im\": [[0]]}"),
            Err(Error::MalformedState(_))
        ));
        assert!(matches!(DensityMatrix::from_json_str("not json"), Err(Error::MalformedState(_))));
        let bad = r#"{"dim": 2, "re": [[2, 0], [0, -1]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(DensityMatrix::from_json_str(bad), Err(Error::NotPositive { .. })));
    }
}
