use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}] (alpha = {alpha}): estimated error {error:e} exceeds target {target:e}")]
    Precision {
        alpha: f64,
        a: f64,
        b: f64,
        error: f64,
        target: f64,
    },

    /// A residual cofactor of `n^3 + 2` could be neither certified prime nor split.
    #[error("factorisation contract violated at n = {n}: residual {residual} is not certified")]
    Factorization { n: u64, residual: u128 },

    #[error("malformed prime/root cache: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
