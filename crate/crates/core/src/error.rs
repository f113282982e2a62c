use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("point maps to infinity (denominator {0:e})")]
    PointAtInfinity(f64),
    #[error("matrix is not a member of O(n,1): residual {0:e}")]
    NonMember(f64),
    #[error("calibration error: {0}")]
    Calibration(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
