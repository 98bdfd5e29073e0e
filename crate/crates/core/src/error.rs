use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate candidate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid candidate label `{0}` (1-8 ASCII letters or digits)")]
    InvalidLabel(String),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("vote is not a permutation of the {m} candidates")]
    NotAPermutation { m: usize },
    #[error("negative weight `{0}`")]
    NegativeWeight(String),
    #[error("weight `{0}` is not a nonnegative integer")]
    InvalidWeight(String),
    #[error("weight arithmetic overflowed the 63-bit range")]
    Overflow,
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("invalid cup schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("{what} is {actual}, above the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: u64,
        limit: u64,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Strips line-number wrappers added by the file parsers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }
}
