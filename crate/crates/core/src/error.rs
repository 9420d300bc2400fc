use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("point/space kind mismatch: {0}")]
    KindMismatch(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("`{operation}` is not available on {space}")]
    Unsupported {
        operation: &'static str,
        space: String,
    },

    /// Ratio whose denominator vanished. Both raw moments are kept so the
    /// caller can tell 0/0 apart from x/0.
    #[error("degenerate denominator in {ratio}: numerator = {numerator}, denominator = {denominator}")]
    Degenerate {
        ratio: &'static str,
        numerator: f64,
        denominator: f64,
    },

    #[error("unknown {kind} `{name}`; available: {available}")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("{0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
