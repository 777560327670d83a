use thiserror::Error;

/// Errors for state validation, decomposition and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("local dimension must be at least 2 (got {0})")]
    InvalidDimension(usize),

    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix side {0} is not the square of a local dimension >= 2")]
    NotBipartite(usize),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace differs from one by {deviation:.3e} (tol {tol:.3e})")]
    TraceNotOne { deviation: f64, tol: f64 },

    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{tol:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tol: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("imaginary residue {magnitude:.3e} exceeds tolerance {tol:.3e}")]
    ImaginaryResidue { magnitude: f64, tol: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("state construction failed: {0}")]
    Construction(String),

    #[error(
        "certification failed: expected singlet {singlet:.12} - 1e-9 <= numeric {numeric:.12} <= \
         {bound:.12} + 1e-9 (thm1 {thm1:.12}, cor1 {cor1:.12}, prior {prior:.12})"
    )]
    CertificationFailed {
        singlet: f64,
        numeric: f64,
        bound: f64,
        thm1: f64,
        cor1: f64,
        prior: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
