//! Maximization of concave objectives over the probability simplex.
//!
//! Spectral projected-gradient ascent: finite-difference gradients, a
//! Barzilai–Borwein trial step projected onto the simplex, and Armijo
//! backtracking along the resulting feasible direction. Several starts are
//! run and the best point is kept.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{dirichlet, trial_rng};
use crate::states::DiagonalState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Total number of starting points (uniform, caller hints, then Dirichlet draws).
    pub restarts: usize,
    pub max_iters: usize,
    /// Finite-difference step.
    pub grad_step: f64,
    /// Convergence is declared when the projected-gradient residual
    /// `‖P(p + ∇f) − p‖∞` falls below `100 · conv_tol`.
    pub conv_tol: f64,
    /// Lower bound on every probability.
    pub prob_floor: f64,
    /// Resolution of [`grid_scan_2d`].
    pub grid_points: usize,
    /// Seed for the Dirichlet starting points.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 500,
            grad_step: 1e-6,
            conv_tol: 1e-9,
            prob_floor: 1e-12,
            grid_points: 2001,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self, d: usize) -> Result<()> {
        let positive = self.restarts > 0
            && self.max_iters > 0
            && self.grad_step > 0.0
            && self.conv_tol > 0.0
            && self.prob_floor > 0.0
            && self.grid_points > 1;
        if !positive {
            return Err(Error::InvalidArgument("optimizer settings must be positive".into()));
        }
        if self.prob_floor * d as f64 >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "prob_floor {} too large for dimension {d}",
                self.prob_floor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptimum {
    pub point: DiagonalState,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective per iteration of the winning start.
    pub history: Vec<f64>,
}

/// Euclidean projection onto `{p : p_i ≥ 0, Σ p_i = 1}` (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumulative += uk;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn floor_normalize(p: &mut [f64], floor: f64) {
    p.iter_mut().for_each(|x| *x = x.max(floor));
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
}

fn gradient(objective: &impl Fn(&[f64]) -> f64, p: &[f64], f0: f64, h: f64) -> Vec<f64> {
    let mut x = p.to_vec();
    (0..p.len())
        .map(|i| {
            let pi = p[i];
            x[i] = pi + h;
            let up = objective(&x);
            let g = if pi >= h {
                x[i] = pi - h;
                (up - objective(&x)) / (2.0 * h)
            } else {
                (up - f0) / h
            };
            x[i] = pi;
            g
        })
        .collect()
}

fn projected_residual(p: &[f64], g: &[f64]) -> f64 {
    let shifted: Vec<f64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
    project_to_simplex(&shifted)
        .iter()
        .zip(p)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

struct Run {
    point: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn ascend(objective: &impl Fn(&[f64]) -> f64, start: &[f64], cfg: &OptimizerConfig) -> Run {
    const ARMIJO: f64 = 1e-4;
    const STEP_MIN: f64 = 1e-10;
    const STEP_MAX: f64 = 1e10;
    let stationary = 100.0 * cfg.conv_tol;

    let mut p = project_to_simplex(start);
    floor_normalize(&mut p, cfg.prob_floor);
    let mut f = objective(&p);
    let mut g = gradient(objective, &p, f, cfg.grad_step);
    let mut history = vec![f];
    let mut step = 1.0;

    for it in 1..=cfg.max_iters {
        let residual = projected_residual(&p, &g);
        if residual <= stationary {
            return Run { point: p, value: f, iterations: it - 1, converged: true, history };
        }
        let mut trial: Vec<f64> = p.iter().zip(&g).map(|(a, b)| a + step * b).collect();
        trial = project_to_simplex(&trial);
        floor_normalize(&mut trial, cfg.prob_floor);
        let dir: Vec<f64> = trial.iter().zip(&p).map(|(a, b)| a - b).collect();
        let slope: f64 = dir.iter().zip(&g).map(|(a, b)| a * b).sum();

        let mut lambda = 1.0;
        let accepted = loop {
            let cand: Vec<f64> = p.iter().zip(&dir).map(|(a, b)| a + lambda * b).collect();
            let fc = objective(&cand);
            if fc.is_finite() && fc >= f + ARMIJO * lambda * slope {
                break Some((cand, fc));
            }
            lambda *= 0.5;
            if lambda < 1e-12 {
                break None;
            }
        };
        let Some((next, f_next)) = accepted else {
            // no ascent left at this resolution
            let converged = residual <= cfg.conv_tol.sqrt();
            return Run { point: p, value: f, iterations: it, converged, history };
        };

        let g_next = gradient(objective, &next, f_next, cfg.grad_step);
        let s: Vec<f64> = next.iter().zip(&p).map(|(a, b)| a - b).collect();
        let ss: f64 = s.iter().map(|x| x * x).sum();
        // curvature of −f along s
        let sy: f64 = s.iter().zip(g_next.iter().zip(&g)).map(|(si, (gn, go))| -si * (gn - go)).sum();
        step = if sy > 0.0 { (ss / sy).clamp(STEP_MIN, STEP_MAX) } else { STEP_MAX };

        p = next;
        f = f_next;
        g = g_next;
        history.push(f);
    }
    let converged = projected_residual(&p, &g) <= stationary;
    Run { point: p, value: f, iterations: cfg.max_iters, converged, history }
}

/// Maximizes `objective` over the `d`-simplex from the default starts.
pub fn optimize_over_simplex(
    objective: impl Fn(&[f64]) -> f64,
    d: usize,
    cfg: &OptimizerConfig,
) -> Result<SimplexOptimum> {
    optimize_over_simplex_from(objective, d, cfg, &[])
}

/// As [`optimize_over_simplex`] with caller-supplied starting points tried
/// right after the uniform distribution.
///
/// `objective` is evaluated on nonnegative vectors that may sum to `1 ± grad_step`.
pub fn optimize_over_simplex_from(
    objective: impl Fn(&[f64]) -> f64,
    d: usize,
    cfg: &OptimizerConfig,
    hints: &[Vec<f64>],
) -> Result<SimplexOptimum> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    cfg.validate(d)?;
    if d == 1 {
        let value = objective(&[1.0]);
        return Ok(SimplexOptimum {
            point: DiagonalState::uniform(1),
            value,
            iterations: 0,
            converged: true,
            history: vec![value],
        });
    }

    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / d as f64; d]];
    starts.extend(hints.iter().filter(|h| h.len() == d).cloned());
    let mut k = 0;
    while starts.len() < cfg.restarts {
        starts.push(dirichlet(d, 1.0, &mut trial_rng(cfg.seed, k)));
        k += 1;
    }
    starts.truncate(cfg.restarts.max(1));

    let mut best: Option<Run> = None;
    for start in &starts {
        let run = ascend(&objective, start, cfg);
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    let point = DiagonalState::from_weights(&best.point)?;
    Ok(SimplexOptimum {
        point,
        value: best.value,
        iterations: best.iterations,
        converged: best.converged,
        history: best.history,
    })
}

/// Oracle for `d = 2`: the best of `grid_points` evenly spaced `(p, 1 − p)`,
/// clamped to the optimizer's probability floor.
pub fn grid_scan_2d(objective: impl Fn(&[f64]) -> f64, cfg: &OptimizerConfig) -> (DiagonalState, f64) {
    let n = cfg.grid_points.max(2);
    let mut best = (0.5, f64::NEG_INFINITY);
    for k in 0..n {
        let p = (k as f64 / (n - 1) as f64).clamp(cfg.prob_floor, 1.0 - cfg.prob_floor);
        let v = objective(&[p, 1.0 - p]);
        if v > best.1 {
            best = (p, v);
        }
    }
    (
        DiagonalState::from_weights(&[best.0, 1.0 - best.0]).expect("grid point on simplex"),
        best.1,
    )
}
