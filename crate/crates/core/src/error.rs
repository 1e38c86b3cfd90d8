use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular curve (discriminant is zero)")]
    Singular,

    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),

    #[error("could not factor {residue} within the iteration budget (partial factors: {partial:?})")]
    Unfactored {
        partial: Vec<(BigInt, u32)>,
        residue: BigInt,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
