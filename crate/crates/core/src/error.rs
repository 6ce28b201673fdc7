use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation not defined for {0} states")]
    UnsupportedState(&'static str),

    #[error("coherence undefined: initial state has no off-diagonal content")]
    CoherenceUndefined,

    #[error("thermalization undefined: state is the zero-temperature ground state")]
    ThermalizationUndefined,

    #[error("numerical failure: {reason} (last estimate {last_estimate:e})")]
    NumericalFailure { reason: String, last_estimate: f64 },

    #[error("truncation too small: tail population {tail:e}, try dim >= {suggested_dim}")]
    InsufficientTruncation { tail: f64, suggested_dim: usize },

    #[error("integration quality: trace drift {drift:e} exceeds tolerance")]
    IntegrationQuality { drift: f64 },

    #[error("step size underflow at t = {t}")]
    Stiffness { t: f64 },

    #[error("square-root branch violated: G(z) = {value} at z = {z}")]
    Branch { z: f64, value: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("grid truncation: boundary mass {mass:e}")]
    GridTruncation { mass: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{what} must be finite, got {x}")))
    }
}
