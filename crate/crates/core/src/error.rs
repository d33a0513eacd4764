use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("trace drifted by {drift:.3e} (limit {limit:.1e})")]
    TraceDrift { drift: f64, limit: f64 },

    #[error("tomogram slice at theta={theta:.6} integrates to 1{deviation:+.3e}")]
    Normalization { theta: f64, deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
