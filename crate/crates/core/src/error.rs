use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("not a Lie algebra: {0}")]
    Jacobi(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("algebra {0} is not of triangular type")]
    NotTriangular(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("non-generic sampling: {0}")]
    NonGenericSampling(String),
    #[error("exact mode requires a diagonal metric; use approximate mode")]
    ExactModeNeedsDiagonal,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("catalog data: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;
