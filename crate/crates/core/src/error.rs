use thiserror::Error;

/// Errors raised by the lab kernels.
///
/// The variants map one-to-one onto the CLI exit classes: `Config` is a
/// configuration error, `PrecisionInsufficient` is the precision exit path,
/// everything else is a domain or structural failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("grading mismatch: exponents {0} and {1} differ by a non-integer")]
    GradingMismatch(String, String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("diophantine condition not verified: {0}")]
    ConditionUnverified(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("undecided comparison: {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Domain(msg.into()))
}

pub(crate) fn precision<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::PrecisionInsufficient(msg.into()))
}
