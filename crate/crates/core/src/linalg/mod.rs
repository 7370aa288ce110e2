//! Dense complex Hermitian linear algebra.

mod eigen;
mod funcs;
mod hermitian;
mod matrix;

pub use eigen::{eigh, eigh_with_sweeps, Spectrum};
pub use funcs::{
    matrix_function, matrix_power, orthonormal_columns, psd_order_leq, spectral_function,
    support_threshold, LoewnerComparison,
};
pub use hermitian::HermitianMatrix;
pub use matrix::CMatrix;
pub(crate) use matrix::{ONE, ZERO};
