use thiserror::Error;

/// Errors raised by the construction and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// The squared-distance matrix has no Euclidean realization.
    #[error("not Euclidean: centered Gram has eigenvalue {eigenvalue:e} below -{tol:e} * {lambda_max:e}")]
    NotEuclidean {
        eigenvalue: f64,
        lambda_max: f64,
        tol: f64,
    },

    #[error("input is not a simplex: affine rank {rank} < {expected}")]
    NotSimplex { rank: usize, expected: usize },

    /// Fewer points than the operation needs; callers handle this case themselves.
    #[error("trivial input: {0}")]
    TrivialInput(String),

    #[error("matrix is not almost regular: margin {margin:e} <= 0")]
    NotAlmostRegular { margin: f64 },

    #[error("certificate failed verification: max relative error {max_rel:e} > {tol:e}")]
    VerificationFailed { max_rel: f64, tol: f64 },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
