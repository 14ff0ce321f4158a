use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Model (c) pairs with infinite cost may never be compared.
    #[error("comparison between {0} and {1} is forbidden (infinite cost)")]
    ForbiddenComparison(usize, usize),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("instance too large: n = {n} exceeds the limit of {max}")]
    Size { n: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
