//! Seeded property suites.
//!
//! Each suite draws `trials` independent instances, one RNG stream per
//! trial, and records a signed margin per instance: nonnegative means the
//! property held exactly, and the instance passes when `margin ≥ −tol`.
//! Suites marked `hard` decide the overall verdict; the others are censuses
//! reported for information.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::channels::{
    check_lemma2, check_lemma3, check_strong_monotonicity, find_tsallis_alpha_violation, random_cptp_channel_with,
    random_incoherent_channel_with, random_unitary_mixture_with, KrausChannel, MatrixDump,
};
use crate::entropy::{deformed_log, f_q, fidelity, t_q_bounds, t_q_operator, AlphaParam, EntropyParam};
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, HermitianMatrix};
use crate::measures::{c_half, c_q, c_q_max, geometric_coherence, OptimizerConfig};
use crate::sampling::{dirichlet, ginibre, random_unitary, trial_rng, TrialRng};
use crate::states::{block_diag, is_incoherent, maximally_coherent, random_density_with, DensityMatrix, DiagonalState};

/// Counterexamples kept per suite.
const MAX_COUNTEREXAMPLES: usize = 5;

pub const OPERATOR_TOL: f64 = 1e-9;
pub const SCALAR_TOL: f64 = 1e-12;
pub const AXIOM_TOL: f64 = 1e-7;
pub const ADDITIVITY_TOL: f64 = 1e-6;
pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const FAITHFUL_VALUE: f64 = 1e-8;
pub const FAITHFUL_OFFDIAG: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub hard: bool,
    pub trials: usize,
    pub passes: usize,
    /// Smallest margin seen; `None` when no trial ran.
    pub worst_margin: Option<f64>,
    pub counterexamples: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.passes == self.trials
    }

    pub fn pass_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub suites: Vec<SuiteReport>,
    pub overall: &'static str,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.overall == "pass"
    }

    pub fn failed_hard_suites(&self) -> impl Iterator<Item = &SuiteReport> {
        self.suites.iter().filter(|s| s.hard && !s.passed())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    /// Negative control: adds a channel with broken completeness to the
    /// channel-completeness suite.
    pub inject_corrupt_channel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            dims: vec![2, 3],
            seed: 0,
            optimizer: OptimizerConfig::default(),
            inject_corrupt_channel: false,
        }
    }
}

/// One instance: signed margin, allowed slack, and a dump for failures.
struct Outcome {
    margin: f64,
    tol: f64,
    detail: Value,
}

impl Outcome {
    fn new(margin: f64, tol: f64, detail: Value) -> Self {
        Self { margin, tol, detail }
    }

    fn passed(&self) -> bool {
        self.margin >= -self.tol
    }
}

/// Runs `trials` instances in parallel, merged in trial order. Trial `t`
/// of suite `id` draws from stream `(id << 32) | t`.
fn run_suite(
    name: impl Into<String>,
    hard: bool,
    id: u64,
    trials: usize,
    seed: u64,
    trial: impl Fn(&mut TrialRng, usize) -> Result<Outcome> + Sync,
) -> SuiteReport {
    let outcomes: Vec<Result<Outcome>> = (0..trials)
        .into_par_iter()
        .map(|t| trial(&mut trial_rng(seed, (id << 32) | t as u64), t))
        .collect();
    let mut report = SuiteReport {
        name: name.into(),
        hard,
        trials,
        passes: 0,
        worst_margin: None,
        counterexamples: Vec::new(),
    };
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let (passed, margin, detail) = match outcome {
            Ok(o) => (o.passed() && o.margin.is_finite(), o.margin, o.detail),
            Err(e) => (false, f64::NEG_INFINITY, json!({ "error": e.to_string() })),
        };
        if margin.is_finite() || margin == f64::NEG_INFINITY {
            report.worst_margin = Some(report.worst_margin.map_or(margin, |w| w.min(margin)));
        }
        if passed {
            report.passes += 1;
        } else if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
            let mut entry = json!({ "trial": t, "margin": json_f64(margin) });
            if let (Value::Object(map), Value::Object(extra)) = (&mut entry, detail) {
                map.extend(extra);
            }
            report.counterexamples.push(entry);
        }
    }
    report
}

fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn dump(h: &HermitianMatrix) -> Value {
    serde_json::to_value(MatrixDump::from(h.as_matrix())).unwrap_or(Value::Null)
}

fn dump_channel(phi: &KrausChannel) -> Value {
    let ks: Vec<MatrixDump> = phi.kraus().iter().map(Into::into).collect();
    serde_json::to_value(ks).unwrap_or(Value::Null)
}

fn full_rank(d: usize, rng: &mut TrialRng) -> Result<DensityMatrix> {
    random_density_with(d, d, rng)
}

/// Random positive definite matrix with trace in `(0.5, 2)`; not normalized.
fn positive_operator(d: usize, rng: &mut TrialRng) -> Result<HermitianMatrix> {
    let s = rng.random_range(0.5..2.0);
    Ok(full_rank(d, rng)?.hermitian().scale(s))
}

fn min_eig(h: &HermitianMatrix) -> Result<f64> {
    Ok(eigh(h)?.min())
}

/// `−‖a − b‖_max`.
fn equality_margin(a: &CMatrix, b: &CMatrix) -> f64 {
    -a.max_abs_diff(b)
}

const SANDWICH_QS: [f64; 3] = [0.2, 0.5, 0.8];

fn q_param(q: f64) -> Result<EntropyParam> {
    EntropyParam::new(q)
}

fn axiom_q(rng: &mut TrialRng) -> Result<EntropyParam> {
    EntropyParam::measure(rng.random_range(0.1..=0.9))
}

// ---------------------------------------------------------------- scalar

/// `1 − 1/x ≤ ln_{1−q} x ≤ x − 1` for `x > 0`, `q ∈ [0, 1)`.
pub fn suite_deformed_log(trials: usize, seed: u64) -> SuiteReport {
    run_suite("deformed-log-sandwich", true, 1, trials, seed, |rng, _| {
        let x = rng.random_range(-6.0f64..6.0).exp();
        let q = rng.random_range(0.0..1.0);
        let l = deformed_log(x, q_param(q)?)?;
        let margin = (l - (1.0 - 1.0 / x)).min((x - 1.0) - l);
        Ok(Outcome::new(margin, SCALAR_TOL, json!({ "x": x, "q": q, "ln": l })))
    })
}

/// `[Σ q_n]^{1−q} [Σ p_n f_n^{1/q}]^q ≥ Σ p_n^q q_n^{1−q} f_n` for nonnegative vectors.
pub fn suite_holder(trials: usize, seed: u64) -> SuiteReport {
    run_suite("holder-step", true, 2, trials, seed, |rng, _| {
        let n = rng.random_range(1..=6);
        let q = rng.random_range(0.01..0.99);
        let draw = |rng: &mut TrialRng| -> Vec<f64> {
            (0..n).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..1.0) }).collect()
        };
        let p = draw(rng);
        let qs = draw(rng);
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let lhs = qs.iter().sum::<f64>().powf(1.0 - q)
            * p.iter().zip(&f).map(|(a, b)| a * b.powf(1.0 / q)).sum::<f64>().powf(q);
        let rhs: f64 = (0..n).map(|i| p[i].powf(q) * qs[i].powf(1.0 - q) * f[i]).sum();
        Ok(Outcome::new(lhs - rhs, SCALAR_TOL, json!({ "q": q, "p": p, "qn": qs, "f": f })))
    })
}

// ---------------------------------------------------------------- operator

/// `ρ − ρσ⁻¹ρ ⪯ T_q(ρ‖σ) ⪯ σ − ρ` on full-rank pairs, `q` cycling over {0.2, 0.5, 0.8}.
pub fn suite_t_q_sandwich(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-sandwich/d={d}"), true, 10 + d as u64, trials, seed, |rng, t| {
        let q = SANDWICH_QS[t % SANDWICH_QS.len()];
        let rho = full_rank(d, rng)?;
        let sigma = full_rank(d, rng)?;
        let tq = t_q_operator(&rho, &sigma, q_param(q)?)?;
        let (lower, upper) = t_q_bounds(&rho, &sigma)?;
        let margin = min_eig(&tq.sub(&lower)?)?.min(min_eig(&upper.sub(&tq)?)?);
        Ok(Outcome::new(
            margin,
            OPERATOR_TOL,
            json!({ "q": q, "rho": dump(rho.hermitian()), "sigma": dump(sigma.hermitian()) }),
        ))
    })
}

/// `T_q(ρ‖ρ) = 0`.
pub fn suite_t_q_self(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-self-zero/d={d}"), true, 20 + d as u64, trials, seed, |rng, t| {
        let q = SANDWICH_QS[t % SANDWICH_QS.len()];
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let tq = t_q_operator(&rho, &rho, q_param(q)?)?;
        Ok(Outcome::new(-tq.max_abs(), 1e-10, json!({ "q": q, "rho": dump(rho.hermitian()) })))
    })
}

/// Homogeneity: `T_q(αρ‖ασ) = α T_q(ρ‖σ)`.
pub fn suite_homogeneity(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-homogeneity/d={d}"), true, 30 + d as u64, trials, seed, |rng, _| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let rho = positive_operator(d, rng)?;
        let sigma = positive_operator(d, rng)?;
        let alpha = rng.random_range(0.1..5.0);
        let lhs = t_q_operator(&rho.scale(alpha), &sigma.scale(alpha), q)?;
        let rhs = t_q_operator(&rho, &sigma, q)?.scale(alpha);
        Ok(Outcome::new(equality_margin(&lhs, &rhs), OPERATOR_TOL, json!({ "q": q.value(), "alpha": alpha })))
    })
}

/// Monotonicity in σ: `σ ⪯ τ ⇒ T_q(ρ‖σ) ⪯ T_q(ρ‖τ)`.
pub fn suite_monotonicity(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-monotonicity/d={d}"), true, 40 + d as u64, trials, seed, |rng, _| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let rho = positive_operator(d, rng)?;
        let sigma = positive_operator(d, rng)?;
        let rank = rng.random_range(1..=d);
        let g = ginibre(d, rank, rng);
        let tau = sigma.add(&HermitianMatrix::symmetrized(&g * &g.adjoint()).scale(0.1))?;
        let diff = t_q_operator(&rho, &tau, q)?.sub(&t_q_operator(&rho, &sigma, q)?)?;
        Ok(Outcome::new(
            min_eig(&diff)?,
            OPERATOR_TOL,
            json!({ "q": q.value(), "rho": dump(&rho), "sigma": dump(&sigma), "tau": dump(&tau) }),
        ))
    })
}

/// Superadditivity: `T_q(ρ₁+ρ₂‖σ₁+σ₂) ⪰ T_q(ρ₁‖σ₁) + T_q(ρ₂‖σ₂)`.
pub fn suite_superadditivity(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-superadditivity/d={d}"), true, 50 + d as u64, trials, seed, |rng, _| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let (r1, r2, s1, s2) =
            (positive_operator(d, rng)?, positive_operator(d, rng)?, positive_operator(d, rng)?, positive_operator(d, rng)?);
        let whole = t_q_operator(&r1.add(&r2)?, &s1.add(&s2)?, q)?;
        let parts = t_q_operator(&r1, &s1, q)?.add(&t_q_operator(&r2, &s2, q)?)?;
        Ok(Outcome::new(min_eig(&whole.sub(&parts)?)?, OPERATOR_TOL, json!({ "q": q.value() })))
    })
}

/// Joint concavity: `T_q(αρ₁+βρ₂‖ασ₁+βσ₂) ⪰ αT_q(ρ₁‖σ₁) + βT_q(ρ₂‖σ₂)`, `α + β = 1`.
pub fn suite_joint_concavity(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-joint-concavity/d={d}"), true, 60 + d as u64, trials, seed, |rng, _| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let a = rng.random_range(0.0..1.0);
        let b = 1.0 - a;
        let (r1, r2, s1, s2) = (full_rank(d, rng)?, full_rank(d, rng)?, full_rank(d, rng)?, full_rank(d, rng)?);
        let (r1, r2, s1, s2) = (r1.hermitian(), r2.hermitian(), s1.hermitian(), s2.hermitian());
        let mix_r = r1.scale(a).add(&r2.scale(b))?;
        let mix_s = s1.scale(a).add(&s2.scale(b))?;
        let whole = t_q_operator(&mix_r, &mix_s, q)?;
        let parts = t_q_operator(r1, s1, q)?.scale(a).add(&t_q_operator(r2, s2, q)?.scale(b))?;
        Ok(Outcome::new(min_eig(&whole.sub(&parts)?)?, OPERATOR_TOL, json!({ "q": q.value(), "alpha": a })))
    })
}

/// Unitary covariance `T_q(UρU†‖UσU†) = U T_q(ρ‖σ) U†`, hence equal traces.
pub fn suite_unitary_invariance(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-unitary-invariance/d={d}"), true, 70 + d as u64, trials, seed, |rng, _| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let rho = full_rank(d, rng)?;
        let sigma = full_rank(d, rng)?;
        let u = random_unitary(d, rng);
        let lhs = t_q_operator(&rho.hermitian().congruence(&u)?, &sigma.hermitian().congruence(&u)?, q)?;
        let rhs = t_q_operator(&rho, &sigma, q)?.congruence(&u)?;
        Ok(Outcome::new(equality_margin(&lhs, &rhs), OPERATOR_TOL, json!({ "q": q.value() })))
    })
}

/// Unital channel for trial `t`: dephasing on even trials, a random unitary
/// mixture on odd ones.
fn unital_channel(d: usize, t: usize, rng: &mut TrialRng) -> Result<KrausChannel> {
    if t.is_multiple_of(2) {
        Ok(KrausChannel::dephasing(d))
    } else {
        let n = rng.random_range(1..=3);
        random_unitary_mixture_with(d, n, rng)
    }
}

/// Unital-map trace inequality: `Tr Φ(T_q(ρ‖σ)) ≤ Tr T_q(Φρ‖Φσ)` for unital channels.
pub fn suite_unital_trace(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-unital-trace/d={d}"), true, 80 + d as u64, trials, seed, |rng, t| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let rho = full_rank(d, rng)?;
        let sigma = full_rank(d, rng)?;
        let phi = unital_channel(d, t, rng)?;
        let lhs = phi.apply_operator(&t_q_operator(&rho, &sigma, q)?)?.trace_real();
        let rhs = t_q_operator(&phi.apply_operator(rho.hermitian())?, &phi.apply_operator(sigma.hermitian())?, q)?
            .trace_real();
        Ok(Outcome::new(rhs - lhs, OPERATOR_TOL, json!({ "q": q.value(), "kraus": dump_channel(&phi) })))
    })
}

/// Unital-map inequality in operator form: `Φ(T_q(ρ‖σ)) ⪯ T_q(Φρ‖Φσ)` for unital channels.
pub fn suite_unital_loewner(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("t_q-unital-loewner/d={d}"), true, 90 + d as u64, trials, seed, |rng, t| {
        let q = q_param(rng.random_range(0.0..1.0))?;
        let rho = full_rank(d, rng)?;
        let sigma = full_rank(d, rng)?;
        let phi = unital_channel(d, t, rng)?;
        let lhs = phi.apply_operator(&t_q_operator(&rho, &sigma, q)?)?;
        let rhs = t_q_operator(&phi.apply_operator(rho.hermitian())?, &phi.apply_operator(sigma.hermitian())?, q)?;
        Ok(Outcome::new(min_eig(&rhs.sub(&lhs)?)?, OPERATOR_TOL, json!({ "q": q.value(), "kraus": dump_channel(&phi) })))
    })
}

/// `f_q = 1 + (1−q) Tr T_q(ρ‖σ)`.
pub fn suite_consistency(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("f_q-trace-consistency/d={d}"), true, 100 + d as u64, trials, seed, |rng, t| {
        let qv = rng.random_range(0.0..1.0);
        let q = q_param(qv)?;
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let sigma = full_rank(d, rng)?;
        let f = f_q(&rho, &sigma, q)?;
        let via_t = 1.0 + (1.0 - qv) * t_q_operator(&rho, &sigma, q)?.trace_real();
        Ok(Outcome::new(-(f - via_t).abs(), 1e-10, json!({ "q": qv, "f": f, "via_t": via_t })))
    })
}

/// `f_{1/2}(ρ,σ)² ≤ F(ρ,σ)`.
pub fn suite_alt(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("alt-inequality/d={d}"), true, 110 + d as u64, trials, seed, |rng, t| {
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let sigma = random_density_with(d, 1 + (t / d) % d, rng)?;
        let f = f_q(&rho, &sigma, q_param(0.5)?)?;
        let fid = fidelity(&rho, &sigma)?;
        Ok(Outcome::new(
            fid - f * f,
            1e-10,
            json!({ "f_half_sq": f * f, "fidelity": fid, "rho": dump(rho.hermitian()), "sigma": dump(sigma.hermitian()) }),
        ))
    })
}

/// `F(ρ,σ) = F(σ,ρ)`.
pub fn suite_fidelity_symmetry(d: usize, trials: usize, seed: u64) -> SuiteReport {
    run_suite(format!("fidelity-symmetry/d={d}"), true, 120 + d as u64, trials, seed, |rng, t| {
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let sigma = random_density_with(d, d, rng)?;
        let a = fidelity(&rho, &sigma)?;
        let b = fidelity(&sigma, &rho)?;
        Ok(Outcome::new(-(a - b).abs(), OPERATOR_TOL, json!({ "forward": a, "backward": b })))
    })
}

// ---------------------------------------------------------------- channels

fn structured_channel(d: usize, t: usize, rng: &mut TrialRng) -> Result<(&'static str, KrausChannel)> {
    Ok(match t % 3 {
        0 => ("identity", KrausChannel::identity(d)),
        1 => ("unitary", KrausChannel::unitary(random_unitary(d, rng))?),
        _ => ("dephasing", KrausChannel::dephasing(d)),
    })
}

type InequalityFn = fn(&DensityMatrix, &DensityMatrix, &KrausChannel, EntropyParam) -> Result<crate::channels::InequalityCheck>;

#[allow(clippy::too_many_arguments)]
fn inequality_suite(
    name: String,
    hard: bool,
    id: u64,
    d: usize,
    trials: usize,
    seed: u64,
    check: InequalityFn,
    channel: impl Fn(usize, &mut TrialRng) -> Result<(&'static str, KrausChannel)> + Sync,
) -> SuiteReport {
    run_suite(name, hard, id, trials, seed, |rng, t| {
        let qv = rng.random_range(0.05..0.95);
        let rho = full_rank(d, rng)?;
        let sigma = full_rank(d, rng)?;
        let (kind, phi) = channel(t, rng)?;
        let c = check(&rho, &sigma, &phi, q_param(qv)?)?;
        Ok(Outcome::new(
            c.margin(),
            crate::channels::InequalityCheck::TOL,
            json!({
                "q": qv, "channel": kind, "lhs": c.lhs, "rhs": c.rhs,
                "rho": dump(rho.hermitian()), "sigma": dump(sigma.hermitian()), "kraus": dump_channel(&phi),
            }),
        ))
    })
}

fn random_cptp(d: usize, rng: &mut TrialRng) -> Result<(&'static str, KrausChannel)> {
    let env = rng.random_range(1..=3);
    Ok(("cptp", random_cptp_channel_with(d, env, rng)?))
}

fn random_incoherent(d: usize, rng: &mut TrialRng) -> Result<KrausChannel> {
    let n = rng.random_range(1..=d + 1);
    random_incoherent_channel_with(d, n, rng)
}

/// `f_q(Φρ,Φσ) ≥ f_q(ρ,σ)` on identity, unitary and dephasing channels.
pub fn suite_f_q_channel_structured(d: usize, trials: usize, seed: u64) -> SuiteReport {
    inequality_suite(format!("f_q-channel-structured/d={d}"), true, 130 + d as u64, d, trials, seed, check_lemma2, |t, rng| {
        structured_channel(d, t, rng)
    })
}

pub fn suite_f_q_ensemble_structured(d: usize, trials: usize, seed: u64) -> SuiteReport {
    inequality_suite(format!("f_q-ensemble-structured/d={d}"), true, 140 + d as u64, d, trials, seed, check_lemma3, |t, rng| {
        structured_channel(d, t, rng)
    })
}

/// General-CPTP census for the channel monotonicity of `f_q`; not asserted.
pub fn suite_f_q_channel_census(d: usize, trials: usize, seed: u64) -> SuiteReport {
    inequality_suite(format!("f_q-channel-census/d={d}"), false, 150 + d as u64, d, trials, seed, check_lemma2, |_, rng| {
        random_cptp(d, rng)
    })
}

/// Census for the ensemble inequality: random CPTP on even trials,
/// random incoherent channels on odd ones; not asserted.
pub fn suite_f_q_ensemble_census(d: usize, trials: usize, seed: u64) -> SuiteReport {
    inequality_suite(format!("f_q-ensemble-census/d={d}"), false, 160 + d as u64, d, trials, seed, check_lemma3, |t, rng| {
        if t % 2 == 0 {
            random_cptp(d, rng)
        } else {
            Ok(("incoherent", random_incoherent(d, rng)?))
        }
    })
}

/// Every generated channel is complete and maps states to states.
pub fn suite_channel_completeness(d: usize, trials: usize, seed: u64, inject_corrupt: bool) -> SuiteReport {
    run_suite(format!("channel-completeness/d={d}"), true, 170 + d as u64, trials, seed, |rng, t| {
        let (kind, phi) = if inject_corrupt && t == 0 {
            let broken = vec![CMatrix::identity(d).scale(Complex64::new(0.9, 0.0))];
            ("corrupted", KrausChannel::new_unchecked(broken)?)
        } else {
            match t % 3 {
                0 => ("incoherent", random_incoherent(d, rng)?),
                1 => random_cptp(d, rng)?,
                _ => ("unitary-mixture", random_unitary_mixture_with(d, 1 + t % 3, rng)?),
            }
        };
        let rho = full_rank(d, rng)?;
        let residual = phi.completeness_residual();
        let trace_defect = (phi.apply_operator(rho.hermitian())?.trace_real() - 1.0).abs();
        let margin = -(residual.max(trace_defect));
        Ok(Outcome::new(
            margin,
            1e-10,
            json!({ "channel": kind, "completeness_residual": residual, "trace_defect": trace_defect, "kraus": dump_channel(&phi) }),
        ))
    })
}

// ---------------------------------------------------------------- measures

/// C1: `C_q(ρ) ≤ 1e-8` exactly when `ρ` is incoherent (off-diagonals ≤ 1e-9).
/// Even trials draw diagonal states, odd trials full-rank random states.
pub fn suite_faithfulness(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c1-faithfulness/d={d}"), true, 200 + d as u64, trials, seed, |rng, t| {
        let q = axiom_q(rng)?;
        let rho = if t % 2 == 0 {
            DiagonalState::new(dirichlet(d, 1.0, rng))?.to_density()
        } else {
            full_rank(d, rng)?
        };
        let value = c_q(&rho, q, cfg)?.value;
        let incoherent = is_incoherent(&rho, FAITHFUL_OFFDIAG);
        // distance to the wrong side of the threshold
        let margin = if incoherent { FAITHFUL_VALUE - value } else { value - FAITHFUL_VALUE };
        Ok(Outcome::new(
            margin,
            0.0,
            json!({ "q": q.value(), "value": value, "incoherent": incoherent, "rho": dump(rho.hermitian()) }),
        ))
    })
}

/// C2: `C_q(Φρ) ≤ C_q(ρ)` for incoherent `Φ`.
pub fn suite_monotonicity_c2(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c2-monotonicity/d={d}"), true, 210 + d as u64, trials, seed, |rng, _| {
        let q = axiom_q(rng)?;
        let rho = full_rank(d, rng)?;
        let phi = random_incoherent(d, rng)?;
        let before = c_q(&rho, q, cfg)?.value;
        let after = c_q(&phi.apply(&rho)?, q, cfg)?.value;
        Ok(Outcome::new(
            before - after,
            AXIOM_TOL,
            json!({ "q": q.value(), "before": before, "after": after, "rho": dump(rho.hermitian()), "kraus": dump_channel(&phi) }),
        ))
    })
}

/// C3: `Σ p_n C_q(ρ_n) ≤ C_q(ρ)` for selective incoherent measurements.
pub fn suite_strong_monotonicity(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c3-strong-monotonicity/d={d}"), true, 220 + d as u64, trials, seed, |rng, _| {
        let q = axiom_q(rng)?;
        let rho = full_rank(d, rng)?;
        let phi = random_incoherent(d, rng)?;
        let s = check_strong_monotonicity(&rho, &phi, q, cfg)?;
        Ok(Outcome::new(
            s.margin(),
            AXIOM_TOL,
            json!({ "q": q.value(), "avg": s.avg, "total": s.total, "rho": dump(rho.hermitian()), "kraus": dump_channel(&phi) }),
        ))
    })
}

/// C4: `Σ p_i C_q(ρ_i) ≥ C_q(Σ p_i ρ_i)`.
pub fn suite_convexity(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c4-convexity/d={d}"), true, 230 + d as u64, trials, seed, |rng, _| {
        let q = axiom_q(rng)?;
        let w = dirichlet(2, 1.0, rng);
        let states = [full_rank(d, rng)?, full_rank(d, rng)?];
        let mix = DensityMatrix::mixture(&w, &states)?;
        let avg = w[0] * c_q(&states[0], q, cfg)?.value + w[1] * c_q(&states[1], q, cfg)?.value;
        let mixed = c_q(&mix, q, cfg)?.value;
        Ok(Outcome::new(avg - mixed, AXIOM_TOL, json!({ "q": q.value(), "weights": w, "avg": avg, "mixture": mixed })))
    })
}

/// C5: `C_q(pρ₁ ⊕ (1−p)ρ₂) = p C_q(ρ₁) + (1−p) C_q(ρ₂)`.
pub fn suite_additivity(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c5-block-additivity/d={d}"), true, 240 + d as u64, trials, seed, |rng, _| {
        let q = axiom_q(rng)?;
        let p = rng.random_range(0.05..0.95);
        let r1 = full_rank(d, rng)?;
        let r2 = full_rank(d, rng)?;
        let block = c_q(&block_diag(p, &r1, &r2)?, q, cfg)?.value;
        let parts = p * c_q(&r1, q, cfg)?.value + (1.0 - p) * c_q(&r2, q, cfg)?.value;
        Ok(Outcome::new(-(block - parts).abs(), ADDITIVITY_TOL, json!({ "q": q.value(), "p": p, "block": block, "parts": parts })))
    })
}

/// `C_q(ρ) ≤ (d^{(q−1)/q} − 1)/(q − 1)`.
pub fn suite_upper_bound(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c_q-upper-bound/d={d}"), true, 250 + d as u64, trials, seed, |rng, t| {
        let q = axiom_q(rng)?;
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let value = c_q(&rho, q, cfg)?.value;
        let bound = c_q_max(d, q)?;
        Ok(Outcome::new(bound - value, FAITHFUL_VALUE, json!({ "q": q.value(), "value": value, "bound": bound })))
    })
}

/// Maximally coherent states with random phases attain the bound.
pub fn suite_closed_form(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c_q-closed-form/d={d}"), true, 260 + d as u64, trials, seed, |rng, _| {
        let q = axiom_q(rng)?;
        let phases: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let value = c_q(&maximally_coherent(d, &phases)?, q, cfg)?.value;
        let expected = c_q_max(d, q)?;
        Ok(Outcome::new(-(value - expected).abs(), CLOSED_FORM_TOL, json!({ "q": q.value(), "phases": phases, "value": value, "expected": expected })))
    })
}

/// `C_{1/2}(ρ) ≥ 2 C_g(ρ)`.
pub fn suite_half_vs_geometric(d: usize, trials: usize, seed: u64, cfg: &OptimizerConfig) -> SuiteReport {
    run_suite(format!("c_half-vs-geometric/d={d}"), true, 270 + d as u64, trials, seed, |rng, t| {
        let rho = random_density_with(d, 1 + t % d, rng)?;
        let ch = c_half(&rho, cfg)?.value;
        let cg = geometric_coherence(&rho, cfg)?.value;
        Ok(Outcome::new(ch - 2.0 * cg, FAITHFUL_VALUE, json!({ "c_half": ch, "c_g": cg, "rho": dump(rho.hermitian()) })))
    })
}

/// Orders of `q` probed by the α-coherence search.
pub const ALPHA_SEARCH_QS: [f64; 3] = [0.2, 0.5, 2.0];

/// Informational: one entry per `q`; an entry "passes" when a violation of
/// strong monotonicity by the α-coherence was found, and the counterexamples
/// list the entries where none was found within `trials` draws. With
/// `trials == 0` nothing is probed and the report is empty.
pub fn suite_alpha_search(d: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let qs: &[f64] = if trials == 0 { &[] } else { &ALPHA_SEARCH_QS };
    let mut report = SuiteReport {
        name: format!("tsallis-alpha-violation-search/d={d}"),
        hard: false,
        trials: qs.len(),
        passes: 0,
        worst_margin: None,
        counterexamples: Vec::new(),
    };
    let mut found = Vec::new();
    for &q in qs {
        match find_tsallis_alpha_violation(d, AlphaParam::new(q)?, trials, seed)? {
            Some(c) => {
                report.passes += 1;
                let m = c.lhs - c.rhs;
                report.worst_margin = Some(report.worst_margin.map_or(m, |w: f64| w.max(m)));
                found.push(json!({ "q": q, "trial": c.trial, "lhs": c.lhs, "rhs": c.rhs }));
            }
            None => report.counterexamples.push(json!({ "q": q, "result": format!("not found in {trials} trials") })),
        }
    }
    report.counterexamples.extend(found);
    Ok(report)
}

/// Runs every suite. Scalar suites draw `50 × trials` samples.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidArgument("verify dimensions must be at least 2".into()));
    }
    let (n, s, opt) = (cfg.trials, cfg.seed, &cfg.optimizer);
    let mut suites = vec![suite_deformed_log(50 * n, s), suite_holder(50 * n, s)];
    for &d in &cfg.dims {
        suites.extend([
            suite_t_q_sandwich(d, n, s),
            suite_t_q_self(d, n, s),
            suite_homogeneity(d, n, s),
            suite_monotonicity(d, n, s),
            suite_superadditivity(d, n, s),
            suite_joint_concavity(d, n, s),
            suite_unitary_invariance(d, n, s),
            suite_unital_trace(d, n, s),
            suite_unital_loewner(d, n, s),
            suite_consistency(d, n, s),
            suite_alt(d, n, s),
            suite_fidelity_symmetry(d, n, s),
            suite_channel_completeness(d, n, s, cfg.inject_corrupt_channel),
            suite_f_q_channel_structured(d, n, s),
            suite_f_q_ensemble_structured(d, n, s),
            suite_f_q_channel_census(d, n, s),
            suite_f_q_ensemble_census(d, n, s),
            suite_faithfulness(d, n, s, opt),
            suite_monotonicity_c2(d, n, s, opt),
            suite_strong_monotonicity(d, n, s, opt),
            suite_convexity(d, n, s, opt),
            suite_additivity(d, n, s, opt),
            suite_upper_bound(d, n, s, opt),
            suite_closed_form(d, n, s, opt),
            suite_half_vs_geometric(d, n, s, opt),
        ]);
        suites.push(suite_alpha_search(d, 10 * n, s)?);
    }
    let ok = suites.iter().all(|r| !r.hard || r.passed());
    Ok(VerifyReport { schema_version: 1, suites, overall: if ok { "pass" } else { "fail" } })
}
