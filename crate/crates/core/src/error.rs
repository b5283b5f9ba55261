use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate market: up factor equals down factor")]
    DegenerateMarket,

    #[error("point is not a member of the cone")]
    NotMember,

    #[error("census over m = {m} scenarios exceeds the cap of {max} (raise the cap to override)")]
    CensusTooLarge { m: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dimension(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}
