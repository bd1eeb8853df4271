use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("expectation diverges: r = {r} must exceed 1/alpha = {bound}")]
    Diverges { r: f64, bound: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {dims} is not supported by {operation}")]
    Unsupported {
        dims: usize,
        operation: &'static str,
    },
    #[error("instance of size {size} exceeds the exhaustive-search limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
