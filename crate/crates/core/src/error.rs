use thiserror::Error;

use crate::bidegree::Bidegree;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field descriptor `{0}`")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("arity mismatch: N={0} vs N={1}")]
    ArityMismatch(usize, usize),
    #[error("shape mismatch at {at}: {detail}")]
    Shape { at: String, detail: String },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("divisor is not contained in the ambient subspace")]
    NotContained,
    #[error("induced map is not well defined on page {page} at {at}")]
    IllDefined { page: usize, at: Bidegree },
    #[error("total differential does not square to zero in degree {degree} (check the sign convention and filtration direction)")]
    SquareNonZero { degree: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
