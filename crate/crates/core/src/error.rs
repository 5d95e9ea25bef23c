use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure classes. Each maps onto one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed request: wrong dimensions, bad indices, invalid brackets.
    #[error("usage error: {0}")]
    Usage(String),
    /// Inputs outside the physical domain (non-density matrices, bad correlators).
    #[error("domain error: {0}")]
    Domain(String),
    /// The chain state does not have the structure the X-state mapping assumes.
    #[error("model error: {message} (residual {residual:.3e})")]
    Model { message: String, residual: f64 },
    /// An iterative method did not reach its target.
    #[error("numeric error: {message} (residual {residual:.3e})")]
    Numeric { message: String, residual: f64 },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code: 2 usage/domain, 3 model, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) => 2,
            Error::Model { .. } => 3,
            Error::Numeric { .. } => 4,
        }
    }
}
