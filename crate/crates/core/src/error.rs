use thiserror::Error;

/// Errors raised by the pricing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Cholesky factorization hit a negative pivot.
    #[error("matrix is not positive semi-definite (pivot {pivot} = {value:e})")]
    NotPsd { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The ratio-of-means estimator needs at least one paid premium date.
    #[error("total premium leg PV is zero; no premium date precedes any default")]
    ZeroPremium,

    #[error("estimator needs at least one path outcome")]
    NoOutcomes,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        function,
        value,
        domain,
    }
}
