use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bracket is not the commutator at basis pair ({0}, {1})")]
    NotStandard(usize, usize),

    #[error("module shape: {0}")]
    ModuleShape(String),

    #[error("module is not quasi-Poisson: {0}")]
    NotQuasiPoisson(String),

    #[error("action is not multiplicative: {0}")]
    NotMultiplicative(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Format(String),
}
