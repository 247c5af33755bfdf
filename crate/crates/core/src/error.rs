use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("order contains a cycle through `{0}`")]
    CyclicOrder(String),
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("free variable `{0}` has no value")]
    FreeVariable(String),
    #[error("formula does not fit the target: {0}")]
    Unsupported(String),
    #[error("round count {rounds} exceeds solver cap {cap}")]
    CapExceeded { rounds: usize, cap: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
