//! Quantum channels in Kraus form, selective measurements, and the seeded
//! checks of channel inequalities and strong monotonicity.
//!
//! Every randomized trial draws from its own `(seed, trial)` stream, so the
//! searches run in parallel and still return the first hit in trial order.

use log::warn;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{f_q, EntropyParam};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianMatrix, ONE, ZERO};
use crate::measures::{c_q, tsallis_alpha_coherence, OptimizerConfig};
use crate::sampling::{complex_normal, dirichlet, random_isometry, random_unitary, trial_rng};
use crate::states::{random_density_with, DensityMatrix};
use crate::tolerances::Tolerances;
use crate::AlphaParam;

/// Modulus below which a Kraus entry counts as zero in the incoherence test.
pub const INCOHERENCE_TOL: f64 = 1e-12;

/// Completely positive map `ρ ↦ Σ K_n ρ K_n†` with `Σ K_n†K_n = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    /// Validates shapes and completeness.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let channel = Self::new_unchecked(kraus)?;
        let residual = channel.completeness_residual();
        if !(residual <= Tolerances::DEFAULT.completeness) {
            return Err(Error::Incomplete { residual });
        }
        Ok(channel)
    }

    /// Checks shapes only. Used to build deliberately broken channels for
    /// negative controls.
    pub fn new_unchecked(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("channel needs at least one Kraus operator".into()))?;
        let (rows, cols) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().find(|k| k.rows() != rows || k.cols() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: k.cols() });
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![CMatrix::identity(d)] }
    }

    /// Full dephasing with Kraus operators `|i⟩⟨i|`.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|i| CMatrix::from_fn(d, d, |r, c| if r == i && c == i { ONE } else { ZERO }))
            .collect();
        Self { kraus }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
        }
        Self::new(vec![u])
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].cols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].rows()
    }

    /// `‖Σ K_n†K_n − I‖_max`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.input_dim();
        let mut sum = CMatrix::zeros(d, d);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&CMatrix::identity(d))
    }

    /// `‖Σ K_n K_n† − I‖_max ≤ tol` (square channels only).
    pub fn is_unital(&self, tol: f64) -> bool {
        let d = self.output_dim();
        if d != self.input_dim() {
            return false;
        }
        let mut sum = CMatrix::zeros(d, d);
        for k in &self.kraus {
            sum = &sum + &(k * &k.adjoint());
        }
        sum.max_abs_diff(&CMatrix::identity(d)) <= tol
    }

    /// `Σ K_n X K_n†` for any Hermitian `X`.
    pub fn apply_operator(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        if x.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: x.dim() });
        }
        let mut sum = CMatrix::zeros(self.output_dim(), self.output_dim());
        for k in &self.kraus {
            sum = &sum + &k.conjugate(x)?;
        }
        Ok(HermitianMatrix::symmetrized(sum))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_operator(rho.hermitian())?)
    }

    /// Unnormalized branches `K_n X K_n†` with their traces, one per Kraus operator.
    fn branches(&self, x: &HermitianMatrix) -> Result<Vec<(f64, HermitianMatrix)>> {
        if x.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), found: x.dim() });
        }
        self.kraus
            .iter()
            .map(|k| {
                let b = HermitianMatrix::symmetrized(k.conjugate(x)?);
                Ok((b.trace_real(), b))
            })
            .collect()
    }
}

pub fn apply_channel(phi: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    phi.apply(rho)
}

/// Outcome distribution `{p_n, ρ_n}` of a selective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementEnsemble {
    branches: Vec<(f64, DensityMatrix)>,
}

impl MeasurementEnsemble {
    pub fn branches(&self) -> &[(f64, DensityMatrix)] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// `Σ p_n g(ρ_n)`.
    pub fn average(&self, mut g: impl FnMut(&DensityMatrix) -> Result<f64>) -> Result<f64> {
        let mut total = 0.0;
        for (p, rho) in &self.branches {
            total += p * g(rho)?;
        }
        Ok(total)
    }
}

/// `p_n = Tr K_n ρ K_n†`, `ρ_n = K_n ρ K_n† / p_n`; branches with
/// `p_n ≤ 1e-12` are dropped and the remaining mass renormalized.
pub fn selective_measure(phi: &KrausChannel, rho: &DensityMatrix) -> Result<MeasurementEnsemble> {
    let prune = Tolerances::DEFAULT.branch_prune;
    let mut branches = Vec::new();
    for (p, b) in phi.branches(rho.hermitian())? {
        if p > prune {
            branches.push((p, DensityMatrix::normalized(b)?));
        }
    }
    let mass: f64 = branches.iter().map(|(p, _)| p).sum();
    if !(mass > 0.0) {
        return Err(Error::InvalidTrace { trace: mass });
    }
    branches.iter_mut().for_each(|(p, _)| *p /= mass);
    Ok(MeasurementEnsemble { branches })
}

/// First `(kraus, column)` with more than one entry above `tol`.
pub fn incoherence_witness(phi: &KrausChannel, tol: f64) -> Option<(usize, usize)> {
    phi.kraus.iter().enumerate().find_map(|(n, k)| {
        (0..k.cols())
            .find(|&j| (0..k.rows()).filter(|&i| k[(i, j)].norm() > tol).count() > 1)
            .map(|j| (n, j))
    })
}

/// Sufficient structural test: every Kraus column has at most one entry above `tol`.
pub fn is_incoherent_channel(phi: &KrausChannel, tol: f64) -> bool {
    incoherence_witness(phi, tol).is_none()
}

/// `K_n = D_n P_n` with random permutations `P_n` and complex diagonals `D_n`,
/// columns rescaled so that `Σ K_n†K_n = I`.
pub fn random_incoherent_channel(d: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    random_incoherent_channel_with(d, n_kraus, &mut trial_rng(seed, 0))
}

pub fn random_incoherent_channel_with<R: Rng + ?Sized>(d: usize, n_kraus: usize, rng: &mut R) -> Result<KrausChannel> {
    const MAX_DRAWS: usize = 100;
    if d == 0 || n_kraus == 0 {
        return Err(Error::InvalidArgument("need d ≥ 1 and n_kraus ≥ 1".into()));
    }
    for _ in 0..MAX_DRAWS {
        let mut kraus = Vec::with_capacity(n_kraus);
        for _ in 0..n_kraus {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(rng);
            let diag: Vec<_> = (0..d).map(|_| complex_normal(rng)).collect();
            // column j carries diag[perm[j]] in row perm[j]
            kraus.push(CMatrix::from_fn(d, d, |i, j| if i == perm[j] { diag[i] } else { ZERO }));
        }
        let col_norms: Vec<f64> = (0..d)
            .map(|j| kraus.iter().map(|k| (0..d).map(|i| k[(i, j)].norm_sqr()).sum::<f64>()).sum::<f64>().sqrt())
            .collect();
        if col_norms.iter().any(|&c| !(c > 1e-150)) {
            continue;
        }
        for k in &mut kraus {
            *k = CMatrix::from_fn(d, d, |i, j| k[(i, j)] / col_norms[j]);
        }
        return KrausChannel::new(kraus);
    }
    Err(Error::InvalidArgument("could not normalize random incoherent channel".into()))
}

/// Kraus blocks of a random isometry `C^d → C^d ⊗ C^{env_dim}`.
pub fn random_cptp_channel(d: usize, env_dim: usize, seed: u64) -> Result<KrausChannel> {
    random_cptp_channel_with(d, env_dim, &mut trial_rng(seed, 0))
}

pub fn random_cptp_channel_with<R: Rng + ?Sized>(d: usize, env_dim: usize, rng: &mut R) -> Result<KrausChannel> {
    if d == 0 || env_dim == 0 {
        return Err(Error::InvalidArgument("need d ≥ 1 and env_dim ≥ 1".into()));
    }
    let v = random_isometry(d * env_dim, d, rng);
    let kraus = (0..env_dim)
        .map(|k| CMatrix::from_fn(d, d, |i, j| v[(k * d + i, j)]))
        .collect();
    KrausChannel::new(kraus)
}

/// `Σ_k w_k U_k ρ U_k†` with Dirichlet weights; unital.
pub fn random_unitary_mixture_with<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<KrausChannel> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("need d ≥ 1 and n ≥ 1".into()));
    }
    let w = dirichlet(n, 1.0, rng);
    let kraus = w
        .iter()
        .map(|&wk| random_unitary(d, rng).scale_real(wk.sqrt()))
        .collect();
    KrausChannel::new(kraus)
}

/// Two sides of an inequality expected to satisfy `rhs ≥ lhs − tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    pub const TOL: f64 = 1e-9;

    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: rhs >= lhs - Self::TOL }
    }

    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn log_violation(name: &str, check: &InequalityCheck, rho: &DensityMatrix, sigma: &DensityMatrix, phi: &KrausChannel, q: f64) {
    if !check.holds {
        warn!(
            "{name} violated: lhs={} rhs={} q={q} rho={:?} sigma={:?} kraus={:?}",
            check.lhs, check.rhs, rho, sigma, phi.kraus
        );
    }
}

/// Data processing for `f_q`: `lhs = f_q(ρ,σ)`, `rhs = f_q(Φρ, Φσ)`.
pub fn check_lemma2(rho: &DensityMatrix, sigma: &DensityMatrix, phi: &KrausChannel, q: EntropyParam) -> Result<InequalityCheck> {
    let lhs = f_q(rho, sigma, q)?;
    let rhs = f_q(&phi.apply_operator(rho.hermitian())?, &phi.apply_operator(sigma.hermitian())?, q)?;
    let check = InequalityCheck::new(lhs, rhs);
    log_violation("f_q channel monotonicity", &check, rho, sigma, phi, q.value());
    Ok(check)
}

/// Ensemble form: `lhs = f_q(ρ,σ)`, `rhs = Σ_n p_n^q q_n^{1−q} f_q(ρ_n, σ_n)`
/// over Kraus outcomes with `p_n, q_n > 1e-12`.
pub fn check_lemma3(rho: &DensityMatrix, sigma: &DensityMatrix, phi: &KrausChannel, q: EntropyParam) -> Result<InequalityCheck> {
    let prune = Tolerances::DEFAULT.branch_prune;
    let qv = q.value();
    let lhs = f_q(rho, sigma, q)?;
    let mut rhs = 0.0;
    for ((p, rb), (s, sb)) in phi.branches(rho.hermitian())?.into_iter().zip(phi.branches(sigma.hermitian())?) {
        if p > prune && s > prune {
            let f = f_q(&rb.scale(1.0 / p), &sb.scale(1.0 / s), q)?;
            rhs += p.powf(qv) * s.powf(1.0 - qv) * f;
        }
    }
    let check = InequalityCheck::new(lhs, rhs);
    log_violation("f_q ensemble inequality", &check, rho, sigma, phi, qv);
    Ok(check)
}

/// `avg = Σ p_n C(ρ_n)` versus `total = C(ρ)` for a selective measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongMonotonicity {
    pub avg: f64,
    pub total: f64,
    pub holds: bool,
}

impl StrongMonotonicity {
    /// Slack for two optimizer errors.
    pub const TOL: f64 = 1e-7;

    pub fn margin(&self) -> f64 {
        self.total - self.avg
    }
}

fn require_incoherent(phi: &KrausChannel) -> Result<()> {
    match incoherence_witness(phi, INCOHERENCE_TOL) {
        Some((kraus, column)) => Err(Error::NotIncoherentChannel { kraus, column }),
        None => Ok(()),
    }
}

/// `Σ p_n M(ρ_n)` and `M(ρ)` for an arbitrary measure `M`, with `holds` at slack `tol`.
pub fn strong_monotonicity_with(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    tol: f64,
    measure: impl Fn(&DensityMatrix) -> Result<f64>,
) -> Result<StrongMonotonicity> {
    require_incoherent(phi)?;
    let ensemble = selective_measure(phi, rho)?;
    let avg = ensemble.average(&measure)?;
    let total = measure(rho)?;
    Ok(StrongMonotonicity { avg, total, holds: avg <= total + tol })
}

pub fn check_strong_monotonicity(
    rho: &DensityMatrix,
    phi: &KrausChannel,
    q: EntropyParam,
    cfg: &OptimizerConfig,
) -> Result<StrongMonotonicity> {
    strong_monotonicity_with(rho, phi, StrongMonotonicity::TOL, |r| Ok(c_q(r, q, cfg)?.value))
}

/// Real and imaginary parts of a complex matrix, for JSON dumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&CMatrix> for MatrixDump {
    fn from(m: &CMatrix) -> Self {
        let grid = |f: fn(num_complex::Complex64) -> f64| {
            (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(m[(i, j)])).collect()).collect()
        };
        Self { re: grid(|z| z.re), im: grid(|z| z.im) }
    }
}

/// A state and incoherent channel whose selective measurement raises a measure on average.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub state: MatrixDump,
    pub kraus: Vec<MatrixDump>,
    /// `Σ p_n C(ρ_n)`.
    pub lhs: f64,
    /// `C(ρ)`.
    pub rhs: f64,
}

/// Which ranks the searched states have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSchedule {
    /// Every state has full rank.
    Full,
    /// Trial `t` draws a state of rank `1 + t mod d`.
    Cycle,
}

/// Seeded search for a violation of strong monotonicity by `measure`:
/// `Σ p_n M(ρ_n) > M(ρ) + threshold`. Trial `t` draws from stream `t`;
/// the first hit in trial order is returned.
pub fn search_strong_monotonicity_violation(
    d: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
    ranks: RankSchedule,
    measure: impl Fn(&DensityMatrix) -> Result<f64> + Sync,
) -> Result<Option<Counterexample>> {
    if d < 2 {
        return Err(Error::InvalidArgument("search needs d ≥ 2".into()));
    }
    let hit = (0..trials).into_par_iter().find_map_first(|t| {
        let run = || -> Result<Option<Counterexample>> {
            let mut rng = trial_rng(seed, t as u64);
            let rank = match ranks {
                RankSchedule::Full => d,
                RankSchedule::Cycle => 1 + t % d,
            };
            let rho = random_density_with(d, rank, &mut rng)?;
            let n_kraus = rng.random_range(1..=d + 1);
            let phi = random_incoherent_channel_with(d, n_kraus, &mut rng)?;
            let sm = strong_monotonicity_with(&rho, &phi, threshold, &measure)?;
            Ok((!sm.holds).then(|| Counterexample {
                trial: t,
                state: rho.matrix().into(),
                kraus: phi.kraus.iter().map(Into::into).collect(),
                lhs: sm.avg,
                rhs: sm.total,
            }))
        };
        match run() {
            Ok(None) => None,
            Ok(Some(c)) => Some(Ok(c)),
            Err(e) => Some(Err(e)),
        }
    });
    hit.transpose()
}

/// Threshold above which an average increase counts as a violation.
pub const VIOLATION_THRESHOLD: f64 = 1e-6;

/// Searches for a strong-monotonicity violation of the Tsallis α-coherence.
pub fn find_tsallis_alpha_violation(d: usize, q: AlphaParam, trials: usize, seed: u64) -> Result<Option<Counterexample>> {
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    search_strong_monotonicity_violation(d, trials, seed, VIOLATION_THRESHOLD, RankSchedule::Cycle, |r| {
        Ok(tsallis_alpha_coherence(r, q, &cfg)?.value)
    })
}

/// The same search run on `C_q` (full-rank states).
pub fn find_c_q_violation(d: usize, q: EntropyParam, trials: usize, seed: u64) -> Result<Option<Counterexample>> {
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    search_strong_monotonicity_violation(d, trials, seed, VIOLATION_THRESHOLD, RankSchedule::Full, |r| {
        Ok(c_q(r, q, &cfg)?.value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::l1_coherence;
    use crate::states::{maximally_coherent, random_density, DiagonalState};
    use num_complex::Complex64;

    fn q(x: f64) -> EntropyParam {
        EntropyParam::measure(x).unwrap()
    }

    fn hadamard() -> CMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap()
    }

    #[test]
    fn identity_and_dephasing_act_as_expected() {
        let rho = random_density(3, 3, 1).unwrap();
        let out = KrausChannel::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let out = KrausChannel::dephasing(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.dephase().to_density().matrix()) < 1e-15);
    }

    #[test]
    fn incomplete_kraus_set_is_rejected() {
        let k = CMatrix::identity(2).scale_real(0.9);
        assert!(matches!(KrausChannel::new(vec![k.clone()]), Err(Error::Incomplete { .. })));
        assert!(KrausChannel::new_unchecked(vec![k]).is_ok());
        assert!(KrausChannel::new(vec![]).is_err());
        assert!(KrausChannel::new(vec![CMatrix::identity(2), CMatrix::identity(3)]).is_err());
    }

    #[test]
    fn apply_checks_dimension() {
        let rho = random_density(3, 3, 1).unwrap();
        assert!(matches!(
            KrausChannel::identity(2).apply(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_cptp_output_is_a_state() {
        for seed in 0..10 {
            let phi = random_cptp_channel(3, 1 + seed as usize % 4, seed).unwrap();
            assert_eq!(phi.kraus().len(), 1 + seed as usize % 4);
            assert!(phi.completeness_residual() <= 1e-10);
            let rho = random_density(3, 2, seed + 50).unwrap();
            let out = phi.apply(&rho).unwrap();
            assert!((out.hermitian().trace_real() - 1.0).abs() < 1e-10);
        }
        // env_dim = 1 is a unitary channel
        let u = random_cptp_channel(4, 1, 3).unwrap();
        assert!(u.is_unital(1e-10));
    }

    #[test]
    fn selective_measurement_cases() {
        let rho = random_density(2, 2, 4).unwrap();
        let e = selective_measure(&KrausChannel::identity(2), &rho).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.branches()[0].0 - 1.0).abs() < 1e-15);

        let plus = maximally_coherent(2, &[0.0, 0.0]).unwrap();
        let e = selective_measure(&KrausChannel::dephasing(2), &plus).unwrap();
        assert_eq!(e.len(), 2);
        for (n, (p, s)) in e.branches().iter().enumerate() {
            assert!((p - 0.5).abs() < 1e-15);
            assert!((s.matrix()[(n, n)].re - 1.0).abs() < 1e-15);
        }

        // a pure basis state under dephasing leaves one branch
        let zero = DiagonalState::new(vec![1.0, 0.0]).unwrap().to_density();
        assert_eq!(selective_measure(&KrausChannel::dephasing(2), &zero).unwrap().len(), 1);
    }

    #[test]
    fn seeded_ensemble_probabilities_sum_to_one() {
        for seed in 0..20 {
            let phi = random_incoherent_channel(3, 1 + seed as usize % 4, seed).unwrap();
            let rho = random_density(3, 3, seed).unwrap();
            let e = selective_measure(&phi, &rho).unwrap();
            let s: f64 = e.branches().iter().map(|(p, _)| p).sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn incoherent_channel_classification() {
        assert!(is_incoherent_channel(&KrausChannel::dephasing(3), 1e-12));
        let h = KrausChannel::unitary(hadamard()).unwrap();
        assert!(!is_incoherent_channel(&h, 1e-12));
        assert_eq!(incoherence_witness(&h, 1e-12), Some((0, 0)));
        for seed in 0..20 {
            let phi = random_incoherent_channel(4, 1 + seed as usize % 3, seed).unwrap();
            assert!(is_incoherent_channel(&phi, 1e-12));
            assert!(phi.completeness_residual() <= 1e-12);
        }
    }

    #[test]
    fn single_kraus_incoherent_channel_is_unitary() {
        let phi = random_incoherent_channel(3, 1, 9).unwrap();
        assert!(phi.is_unital(1e-12));
        let k = &phi.kraus()[0];
        assert!((&k.adjoint() * k).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn incoherent_channels_keep_diagonal_states_diagonal() {
        let diag = DiagonalState::new(vec![0.2, 0.3, 0.5]).unwrap().to_density();
        for seed in 0..20 {
            let phi = random_incoherent_channel(3, 3, seed).unwrap();
            assert!(l1_coherence(&phi.apply(&diag).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn channel_monotonicity_structured_cases() {
        let rho = random_density(3, 3, 1).unwrap();
        let sigma = random_density(3, 3, 2).unwrap();
        let c = check_lemma2(&rho, &sigma, &KrausChannel::identity(3), q(0.4)).unwrap();
        assert!(c.holds && (c.lhs - c.rhs).abs() < 1e-12);

        let a = DiagonalState::new(vec![0.5, 0.2, 0.3]).unwrap().to_density();
        let b = DiagonalState::new(vec![0.1, 0.6, 0.3]).unwrap().to_density();
        let c = check_lemma2(&a, &b, &KrausChannel::dephasing(3), q(0.6)).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-12);
    }

    #[test]
    fn ensemble_inequality_structured_cases() {
        let rho = random_density(3, 3, 3).unwrap();
        let sigma = random_density(3, 3, 4).unwrap();
        let mut rng = trial_rng(5, 0);
        let u = KrausChannel::unitary(random_unitary(3, &mut rng)).unwrap();
        let c = check_lemma3(&rho, &sigma, &u, q(0.3)).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-10);

        // |+⟩ vs I/2: lhs = ⟨+|σ|+⟩^{1/2}; each branch contributes (1/2)^{1/2}(1/2)^{1/2}·1
        let plus = maximally_coherent(2, &[0.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        let c = check_lemma3(&plus, &mixed, &KrausChannel::dephasing(2), q(0.5)).unwrap();
        assert!((c.rhs - 1.0).abs() < 1e-12);
        assert!((c.lhs - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn strong_monotonicity_structured_cases() {
        let cfg = OptimizerConfig::default();
        let rho = random_density(3, 3, 8).unwrap();
        let s = check_strong_monotonicity(&rho, &KrausChannel::dephasing(3), q(0.5), &cfg).unwrap();
        assert!(s.avg.abs() < 1e-8 && s.holds);

        // pure permutation: relabeling leaves C_q unchanged
        let p = CMatrix::from_fn(3, 3, |i, j| if i == (j + 1) % 3 { Complex64::new(1.0, 0.0) } else { ZERO });
        let s = check_strong_monotonicity(&rho, &KrausChannel::unitary(p).unwrap(), q(0.5), &cfg).unwrap();
        assert!((s.avg - s.total).abs() < 1e-7);

        let h = KrausChannel::unitary(hadamard()).unwrap();
        let rho2 = random_density(2, 2, 1).unwrap();
        assert!(matches!(
            check_strong_monotonicity(&rho2, &h, q(0.5), &cfg),
            Err(Error::NotIncoherentChannel { .. })
        ));
    }

    #[test]
    fn empty_search_finds_nothing() {
        let a = AlphaParam::new(0.5).unwrap();
        assert!(find_tsallis_alpha_violation(2, a, 0, 0).unwrap().is_none());
    }

    #[test]
    fn alpha_search_finds_a_violation_and_is_deterministic() {
        let a = AlphaParam::new(0.2).unwrap();
        let first = find_tsallis_alpha_violation(3, a, 3000, 0).unwrap().expect("violation");
        assert!(first.lhs > first.rhs + VIOLATION_THRESHOLD);
        let again = find_tsallis_alpha_violation(3, a, 3000, 0).unwrap().unwrap();
        assert_eq!(first.trial, again.trial);
        assert_eq!(first.lhs, again.lhs);
    }

    #[test]
    fn c_q_contrast_search_is_clean() {
        assert!(find_c_q_violation(2, q(0.5), 100, 0).unwrap().is_none());
    }
}
