use thiserror::Error;

/// Errors raised by the polynomial, RIF and measure constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violated the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration or a numerical certificate failed.
    #[error("numeric error: {message} (best residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    /// The polynomial has a zero inside the bidisk or on a face of its boundary.
    #[error("not stable: {0}")]
    NotStable(String),

    /// p and its reflection share a factor.
    #[error("not coprime / not a RIF in lowest terms: {0}")]
    NotCoprime(String),

    /// Declared degree is inconsistent with the coefficients.
    #[error("degenerate degree: {0}")]
    DegenerateDegree(String),

    /// A precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>, residual: f64) -> Self {
        Error::Numeric {
            message: message.into(),
            residual,
        }
    }

    /// True for errors caused by the input rather than by floating point.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::NotStable(_)
                | Error::NotCoprime(_)
                | Error::DegenerateDegree(_)
                | Error::Precondition(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
