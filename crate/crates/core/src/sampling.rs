//! Seeded random sampling.
//!
//! Every randomized routine draws from a ChaCha8 stream selected by
//! `(seed, stream)`: the seed fixes the run and the stream index separates
//! independent trials, so trials can run in any order or in parallel and
//! still see the same numbers.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::linalg::{orthonormal_columns, CMatrix};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// `rows x cols` matrix of independent complex standard normals.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Random isometry (`rows ≥ cols`, `V†V = I`) from Gram–Schmidt on a Ginibre draw.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    loop {
        if let Some(v) = orthonormal_columns(&ginibre(rows, cols, rng)) {
            return v;
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    random_isometry(d, d, rng)
}

/// Dirichlet(α, …, α) point on the probability simplex.
pub fn dirichlet<R: Rng + ?Sized>(d: usize, alpha: f64, rng: &mut R) -> Vec<f64> {
    let gamma = Gamma::new(alpha, 1.0).expect("positive shape");
    loop {
        let x: Vec<f64> = (0..d).map(|_| gamma.sample(rng)).collect();
        let s: f64 = x.iter().sum();
        if s > 0.0 && s.is_finite() {
            return x.into_iter().map(|v| v / s).collect();
        }
    }
}
