use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input is outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two inputs that must agree in length do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// The operation is not defined for this bath model.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured resource cap would be exceeded.
    #[error("resource cap exceeded: {what} needs {requested}, cap is {cap}")]
    ResourceCap { what: &'static str, requested: u64, cap: u64 },

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Failures of the quadrature layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    /// The panel budget ran out before the error target was met. The best
    /// estimate so far is carried along.
    #[error(
        "no convergence after {panels} panels: estimate {estimate:e}, error {error:e}, target {target:e}"
    )]
    NoConvergence { estimate: f64, error: f64, target: f64, panels: usize },

    #[error("integrand returned a non-finite value at {at:e}")]
    NonFinite { at: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_finite_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and positive, got {x}"))
    }
}

pub(crate) fn check_finite_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and non-negative, got {x}"))
    }
}
