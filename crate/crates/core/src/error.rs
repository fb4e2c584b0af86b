use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("element {element} out of range for monoid of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("element `{0}` does not belong to this monoid")]
    ForeignElement(String),

    #[error("word of length {len} exceeds the maximum length {max}")]
    WordTooLong { len: usize, max: usize },

    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: u32, found: u32 },

    #[error("monoid mismatch: {0}")]
    MonoidMismatch(String),

    #[error("{what} requires {requested}, above the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("minimal memory set is not contained in the submonoid")]
    MemoryNotContained,

    #[error("cellular automaton is not injective")]
    NotInjective,

    #[error("invalid cellular automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid congruence: {0}")]
    InvalidCongruence(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn cap(what: &'static str, requested: u128, limit: u128) -> Self {
        Error::CapExceeded {
            what,
            requested,
            limit,
        }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
