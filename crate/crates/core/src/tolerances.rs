//! Numerical tolerances shared by every module.
//!
//! The defaults are normative: tests and the CLI rely on them, so changing
//! one changes the contract of the routine that reads it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed `|H_ij - conj(H_ji)|`, relative to `max(1, max|H|)`.
    pub hermitian: f64,
    /// Eigenvalues at or below `support_cutoff * max|λ|` are outside the support.
    pub support_cutoff: f64,
    pub max_sweeps: usize,
    /// Lowest eigenvalue a density matrix may have.
    pub density_psd: f64,
    pub density_trace: f64,
    pub probability_sum: f64,
    /// Max-entry residual of `Σ K†K − I`.
    pub completeness: f64,
    /// Norm of `(I − Π_σ) Π_ρ` tolerated by the support-inclusion check.
    pub support_inclusion: f64,
    /// Largest imaginary part tolerated when a trace should be real.
    pub imaginary_residue: f64,
    /// Ensemble branches at or below this probability are dropped.
    pub branch_prune: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        support_cutoff: 1e-10,
        max_sweeps: 100,
        density_psd: 1e-10,
        density_trace: 1e-10,
        probability_sum: 1e-12,
        completeness: 1e-10,
        support_inclusion: 1e-8,
        imaginary_residue: 1e-10,
        branch_prune: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
