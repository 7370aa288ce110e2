//! Coherence quantifiers.
//!
//! `C_q`, `C_{1/2}`, the geometric coherence and the Tsallis α-coherence are
//! all distances to the incoherent set, computed by maximizing a concave
//! functional of the incoherent state over the probability simplex:
//!
//! | measure | maximized functional | value from optimum `m` |
//! |---|---|---|
//! | `C_q` | `f_q(ρ, σ)` | `(m^{1/q} − 1)/(q − 1)` |
//! | `C_{1/2}` | `f_{1/2}(ρ, σ)` | `2(1 − m²)` |
//! | `C_g` | `F(ρ, σ)` | `1 − m` |
//! | `C̃_q` | `±Tr ρ^q σ^{1−q}` | `(m − 1)/(q − 1)` |
//!
//! Because `1/(q − 1) < 0` for `q ∈ (0, 1)`, minimizing `D_q` over `σ` is the
//! same as maximizing `f_q`, which avoids raising near-zero quantities to the
//! power `1/q` inside the optimizer.
//!
//! The l1 and relative-entropy coherences have closed forms and are included
//! as baselines. Entropies are in bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::{d_q_from_f, shannon_entropy, von_neumann_entropy, AlphaParam, EntropyParam, SupportFrame};
use crate::error::{Error, Result};
use crate::linalg::matrix_power;
pub use crate::optimize::OptimizerConfig;
use crate::optimize::{optimize_over_simplex_from, SimplexOptimum};
use crate::states::{DensityMatrix, DiagonalState};
use crate::tolerances::Tolerances;

/// Result of a coherence computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureReport {
    pub value: f64,
    /// Closest incoherent state found.
    pub optimal_sigma: DiagonalState,
    pub q: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub objective_history: Vec<f64>,
}

impl MeasureReport {
    fn from_optimum(opt: SimplexOptimum, value: f64, q: Option<f64>) -> Self {
        Self {
            value: clamp_rounding(value),
            optimal_sigma: opt.point,
            q,
            iterations: opt.iterations,
            converged: opt.converged,
            objective_history: opt.history,
        }
    }
}

/// Values in `[-1e-10, 0)` are rounding noise of a zero.
fn clamp_rounding(v: f64) -> f64 {
    if (-1e-10..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

fn maximize(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    objective: impl Fn(&[f64]) -> f64,
) -> Result<SimplexOptimum> {
    let hint = rho.dephase().probs().to_vec();
    optimize_over_simplex_from(objective, rho.dim(), cfg, &[hint])
}

fn f_q_objective(frame: &SupportFrame, q: EntropyParam) -> impl Fn(&[f64]) -> f64 + '_ {
    move |p: &[f64]| frame.f_q_diagonal(p, q).unwrap_or(f64::NAN)
}

/// `C_q(ρ) = min_σ D_q(ρ‖σ)` over incoherent `σ`, for `q ∈ (0, 1)`.
pub fn c_q(rho: &DensityMatrix, q: EntropyParam, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let qv = q.value();
    EntropyParam::measure(qv)?;
    let frame = SupportFrame::new(rho.hermitian())?;
    let opt = maximize(rho, cfg, f_q_objective(&frame, q))?;
    let value = d_q_from_f(opt.value, qv);
    Ok(MeasureReport::from_optimum(opt, value, Some(qv)))
}

/// Value of `C_q` on maximally coherent states, `(d^{(q−1)/q} − 1)/(q − 1)`.
pub fn c_q_max(d: usize, q: EntropyParam) -> Result<f64> {
    let q = q.value();
    EntropyParam::measure(q)?;
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(((d as f64).powf((q - 1.0) / q) - 1.0) / (q - 1.0))
}

/// `C_{1/2}(ρ) = min_σ 2{1 − f_{1/2}(ρ,σ)²}`.
pub fn c_half(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let q = EntropyParam::measure(0.5)?;
    let frame = SupportFrame::new(rho.hermitian())?;
    let opt = maximize(rho, cfg, f_q_objective(&frame, q))?;
    let f = opt.value;
    Ok(MeasureReport::from_optimum(opt, 2.0 * (1.0 - f * f), Some(0.5)))
}

/// Geometric coherence `1 − max_σ F(ρ, σ)`.
pub fn geometric_coherence(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let frame = SupportFrame::new(rho.hermitian())?;
    let opt = maximize(rho, cfg, |p: &[f64]| frame.fidelity_diagonal(p).unwrap_or(f64::NAN))?;
    let value = 1.0 - opt.value;
    Ok(MeasureReport::from_optimum(opt, value, None))
}

/// `Tr ρ^q σ^{1−q}` for `σ = diag(p)`, given the diagonal of `ρ^q`.
pub(crate) fn alpha_trace_diagonal(rho_q_diag: &[f64], p: &[f64], q: f64) -> f64 {
    rho_q_diag
        .iter()
        .zip(p)
        .filter(|(a, _)| **a != 0.0)
        .map(|(a, x)| a * x.powf(1.0 - q))
        .sum()
}

/// Tsallis α-coherence `min_σ D̃_q(ρ‖σ)` over incoherent `σ`.
pub fn tsallis_alpha_coherence(rho: &DensityMatrix, q: AlphaParam, cfg: &OptimizerConfig) -> Result<MeasureReport> {
    let qv = q.value();
    let rho_q = matrix_power(rho.hermitian(), qv, Tolerances::DEFAULT.support_cutoff)?;
    let diag: Vec<f64> = rho_q.diagonal().into_iter().map(|x| x.max(0.0)).collect();
    // q < 1: maximize Tr ρ^q σ^{1−q}; q > 1: minimize it
    let sign = if qv < 1.0 { 1.0 } else { -1.0 };
    let opt = maximize(rho, cfg, |p: &[f64]| sign * alpha_trace_diagonal(&diag, p, qv))?;
    let value = (sign * opt.value - 1.0) / (qv - 1.0);
    Ok(MeasureReport::from_optimum(opt, value, Some(qv)))
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = rho.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm();
            }
        }
    }
    s
}

/// `S(Δ(ρ)) − S(ρ)` in bits, `Δ` the full dephasing.
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    let v = shannon_entropy(rho.dephase().probs()) - von_neumann_entropy(rho)?;
    Ok(clamp_rounding(v))
}

/// Named coherence measure, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "cq")]
    Cq,
    #[serde(rename = "c-half")]
    CHalf,
    #[serde(rename = "cg")]
    Cg,
    #[serde(rename = "tsallis-alpha")]
    TsallisAlpha,
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "rel-ent")]
    RelEnt,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Cq,
        Measure::CHalf,
        Measure::Cg,
        Measure::TsallisAlpha,
        Measure::L1,
        Measure::RelEnt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Cq => "cq",
            Measure::CHalf => "c-half",
            Measure::Cg => "cg",
            Measure::TsallisAlpha => "tsallis-alpha",
            Measure::L1 => "l1",
            Measure::RelEnt => "rel-ent",
        }
    }

    /// Checks that `q` is meaningful for this measure.
    pub fn validate_q(self, q: f64) -> Result<()> {
        match self {
            Measure::Cq => EntropyParam::measure(q).map(|_| ()),
            Measure::CHalf if q != 0.5 => Err(Error::ParameterOutOfRange { q, range: "{1/2}" }),
            Measure::TsallisAlpha => AlphaParam::new(q).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Evaluates the measure. For the closed-form baselines the reported
    /// incoherent state is the dephased `ρ`.
    pub fn evaluate(self, rho: &DensityMatrix, q: f64, cfg: &OptimizerConfig) -> Result<MeasureReport> {
        let closed = |value: f64| MeasureReport {
            value,
            optimal_sigma: rho.dephase(),
            q: None,
            iterations: 0,
            converged: true,
            objective_history: Vec::new(),
        };
        match self {
            Measure::Cq => c_q(rho, EntropyParam::measure(q)?, cfg),
            Measure::CHalf => c_half(rho, cfg),
            Measure::Cg => geometric_coherence(rho, cfg),
            Measure::TsallisAlpha => tsallis_alpha_coherence(rho, AlphaParam::new(q)?, cfg),
            Measure::L1 => Ok(closed(l1_coherence(rho))),
            Measure::RelEnt => Ok(closed(rel_entropy_coherence(rho)?)),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::fidelity;
    use crate::optimize::grid_scan_2d;
    use crate::states::{density_from_bloch, maximally_coherent, random_density, BlochVector};

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    fn q(x: f64) -> EntropyParam {
        EntropyParam::measure(x).unwrap()
    }

    #[test]
    fn diagonal_states_have_zero_coherence() {
        let rho = DiagonalState::new(vec![0.5, 0.3, 0.2]).unwrap().to_density();
        assert!(c_q(&rho, q(0.3), &cfg()).unwrap().value.abs() <= 1e-8);
        assert!(c_half(&rho, &cfg()).unwrap().value.abs() <= 1e-8);
        assert!(geometric_coherence(&rho, &cfg()).unwrap().value.abs() <= 1e-8);
        let a = AlphaParam::new(0.5).unwrap();
        assert!(tsallis_alpha_coherence(&rho, a, &cfg()).unwrap().value.abs() <= 1e-8);
        assert_eq!(l1_coherence(&rho), 0.0);
        assert!(rel_entropy_coherence(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_coherent_qubit() {
        let rho = maximally_coherent(2, &[0.0, 0.0]).unwrap();
        let r = c_q(&rho, q(0.5), &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
        assert!((geometric_coherence(&rho, &cfg()).unwrap().value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn c_q_max_examples() {
        assert_eq!(c_q_max(1, q(0.3)).unwrap(), 0.0);
        assert!((c_q_max(2, q(0.5)).unwrap() - 1.0).abs() < 1e-15);
        for &qq in &[0.1, 0.5, 0.9] {
            let vals: Vec<f64> = (2..=8).map(|d| c_q_max(d, q(qq)).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn baselines_on_maximally_coherent() {
        for d in 2..6 {
            let rho = maximally_coherent(d, &vec![0.0; d]).unwrap();
            assert!((l1_coherence(&rho) - (d as f64 - 1.0)).abs() < 1e-12);
            assert!((rel_entropy_coherence(&rho).unwrap() - (d as f64).log2()).abs() < 1e-10);
        }
    }

    #[test]
    fn c_half_equals_c_q_at_half() {
        for seed in 0..5 {
            let rho = random_density(3, 3, seed).unwrap();
            let a = c_half(&rho, &cfg()).unwrap().value;
            let b = c_q(&rho, q(0.5), &cfg()).unwrap().value;
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_qubit_geometric_matches_bloch_formula() {
        let c = BlochVector::new(0.6, 0.0, -0.8).unwrap();
        let rho = density_from_bloch(c).unwrap();
        let expected = 1.0 - (1.0 + c.c3.abs()) / 2.0;
        assert!((geometric_coherence(&rho, &cfg()).unwrap().value - expected).abs() < 1e-9);
        let ch = c_half(&rho, &cfg()).unwrap().value;
        assert!((ch - 2.0 * expected).abs() < 1e-9);
    }

    #[test]
    fn geometric_grid_oracle_qubit() {
        let rho = random_density(2, 2, 17).unwrap();
        let r = geometric_coherence(&rho, &cfg()).unwrap();
        let (_, best) = grid_scan_2d(
            |p| fidelity(&rho, &DiagonalState::from_weights(p).unwrap().to_density()).unwrap(),
            &cfg(),
        );
        assert!((r.value - (1.0 - best)).abs() < 1e-5);
    }

    #[test]
    fn report_sigma_is_valid_and_history_monotone() {
        let rho = random_density(4, 4, 3).unwrap();
        let r = c_q(&rho, q(0.7), &cfg()).unwrap();
        assert!(r.converged);
        assert_eq!(r.optimal_sigma.dim(), 4);
        assert!(r.objective_history.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("nope".parse::<Measure>().is_err());
        assert!(Measure::Cq.validate_q(1.0).is_err());
        assert!(Measure::TsallisAlpha.validate_q(1.5).is_ok());
        assert!(Measure::Cg.validate_q(7.0).is_ok());
    }
}
