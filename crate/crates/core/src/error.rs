use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("invalid map specification: {0}")]
    InvalidSpec(String),

    #[error("custom perturbation does not provide analytic partial derivatives")]
    UnsupportedJacobian,

    #[error("singular Newton matrix at ({x}, {y})")]
    SingularJacobian { x: f64, y: f64 },

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("continuation broken at t = {t}: {reason}")]
    ContinuationBroken { t: f64, reason: String },

    #[error("image ({x}, {y}) left the domain of the Lyapunov function")]
    ImageLeftDomain { x: f64, y: f64 },

    #[error("point ({x}, {y}) is outside the domain of the Lyapunov function")]
    OutsideDomain { x: f64, y: f64 },

    #[error("no tail iterates inside the rate measurement band")]
    RateWindowEmpty,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("segment registry candidate {name} failed validation (residual {residual:e})")]
    Registry { name: String, residual: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
