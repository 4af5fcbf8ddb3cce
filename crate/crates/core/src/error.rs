use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuerbachError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is singular (|det| = {det:e} after row normalization)")]
    Singular { det: f64 },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension {n} exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, AuerbachError>;
