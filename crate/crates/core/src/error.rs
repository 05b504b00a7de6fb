use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative or adaptive procedure could not meet its tolerance.
    /// `estimate` is the best value obtained and `achieved` its error estimate.
    #[error("convergence failure in {what}: estimate {estimate:e}, achieved error {achieved:e}")]
    Convergence {
        what: &'static str,
        estimate: f64,
        achieved: f64,
    },

    /// The dense eigensolver did not converge.
    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("Hilbert-space dimension {dimension} exceeds the configured maximum {maximum}")]
    DimensionTooLarge { dimension: usize, maximum: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
