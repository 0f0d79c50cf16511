use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown quiver spec `{0}` (expected `A<n>` or `cyclic:<n>`)")]
    InvalidQuiver(String),
    #[error("vertex {vertex} out of range for a quiver with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("malformed {what}: `{input}`")]
    Parse { what: &'static str, input: String },
    #[error("segment {0} does not fit in quiver {1}")]
    InvalidSegment(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid socle choice: {0}")]
    InvalidSocleChoice(String),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("words {0} and {1} have different content")]
    ContentMismatch(String, String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("cannot decide invertibility: {0}")]
    Undecidable(String),
    #[error("term error: {0}")]
    Term(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
    }
}
