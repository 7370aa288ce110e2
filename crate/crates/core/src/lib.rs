//! Coherence quantifiers built on the Tsallis relative operator entropy.
//!
//! The crate computes the family
//!
//! ```text
//! C_q(ρ) = min_{σ incoherent} (f_q(ρ,σ)^{1/q} − 1) / (q − 1),
//! f_q(ρ,σ) = Tr[ρ^{1/2} (ρ^{-1/2} σ ρ^{-1/2})^{1−q} ρ^{1/2}],   0 < q < 1,
//! ```
//!
//! together with the geometric coherence, the Tsallis relative α-entropy
//! coherence, and the l1 / relative-entropy baselines. It also carries the
//! channel machinery and Monte-Carlo harnesses used to check the operator
//! inequalities and coherence axioms these quantities are expected to obey.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: Hermitian matrices, Jacobi eigensolver, spectral functions.
//! - [`states`]: density matrices, incoherent states, state constructors.
//! - [`entropy`]: deformed logarithm, `T_q`, `f_q`, `D_q`, α-entropy, fidelity.
//! - [`optimize`]: projected-gradient ascent over the probability simplex.
//! - [`measures`]: the coherence quantifiers.
//! - [`channels`]: Kraus channels, selective measurements, inequality checks.
//! - [`verify`]: the seeded property suites behind the `verify` command.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod sampling;
pub mod states;
pub mod tolerances;
pub mod verify;

pub use channels::{KrausChannel, MeasurementEnsemble};
pub use entropy::{AlphaParam, EntropyParam};
pub use error::{Error, Result};
pub use linalg::{CMatrix, HermitianMatrix, Spectrum};
pub use measures::{MeasureReport, OptimizerConfig};
pub use num_complex::Complex64;
pub use states::{BlochVector, DensityMatrix, DiagonalState};
pub use tolerances::Tolerances;
