use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    EigenNonConvergence { sweeps: usize, residual: f64 },

    #[error("function undefined on eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid Bloch vector: norm {norm} exceeds 1")]
    InvalidBloch { norm: f64 },

    #[error("q out of range: q = {q}, expected {range}")]
    ParameterOutOfRange { q: f64, range: &'static str },

    #[error(
        "support of rho not contained in support of sigma: eigenvector {index} \
         (eigenvalue {eigenvalue:e}) leaks {leakage:e} outside"
    )]
    SupportViolation {
        index: usize,
        eigenvalue: f64,
        leakage: f64,
        eigenvector: Vec<num_complex::Complex64>,
    },

    #[error("Kraus operators are not complete (residual {residual:e})")]
    Incomplete { residual: f64 },

    #[error("channel is not incoherent: Kraus operator {kraus} column {column} has several nonzero entries")]
    NotIncoherentChannel { kraus: usize, column: usize },

    #[error("trace has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed state file: {0}")]
    MalformedState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
