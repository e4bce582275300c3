use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MsfError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what}: no convergence after {terms} terms (last tail estimate {tail:e})")]
    Truncation { what: &'static str, terms: usize, tail: f64 },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("profile is not square integrable at the origin (exponent {0})")]
    NotIntegrable(f64),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("basis expansion residual {residual:e} exceeds {tol:e}")]
    Expansion { residual: f64, tol: f64 },
    #[error("zero-norm state: {0}")]
    ZeroNorm(String),
}

pub type Result<T> = std::result::Result<T, MsfError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(MsfError::Domain(msg.into()))
}
