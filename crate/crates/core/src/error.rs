use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The CLI maps `Domain` to exit code 1 and `Accuracy` to exit code 2.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument violates a precondition of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature did not reach its tolerance within budget.
    #[error("accuracy error: {message} (best estimate {best_estimate:e})")]
    Accuracy {
        message: String,
        best_estimate: f64,
    },

    /// The integrand or evaluator produced a non-finite value.
    #[error("evaluation error: non-finite value at x = {abscissa:e}")]
    Evaluation { abscissa: f64 },

    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_accuracy(&self) -> bool {
        matches!(self, Error::Accuracy { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
