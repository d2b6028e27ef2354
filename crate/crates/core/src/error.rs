use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid subalgebra: {0}")]
    InvalidSubalgebra(String),
    #[error("unknown label `{label}`; valid labels: {valid}")]
    UnknownLabel { label: String, valid: String },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("bracket table is not closed: {0} remainder(s)")]
    NotClosed(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
