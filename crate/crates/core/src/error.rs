use thiserror::Error;

/// Errors raised while validating inputs or running an operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {0} has an endpoint outside the vertex set")]
    DanglingEndpoint(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate color `{0}` in alphabet")]
    DuplicateColor(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has sinks: {0:?}")]
    Sinks(Vec<String>),
    #[error("vertex map is not total: expected {expected} entries, got {got}")]
    MapNotTotal { expected: usize, got: usize },
    #[error("vertex map sends a vertex outside the target")]
    MapOutOfRange,
    #[error("order is not antisymmetric: `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("empty poset")]
    EmptyPoset,
    #[error("graph is not monotone: {0}")]
    NotMonotone(String),
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("alphabets overlap on `{0}`")]
    AlphabetOverlap(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
