use thiserror::Error;

/// Errors raised by constructions, checks and file handling.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("reserved token {0:?} in input word")]
    ReservedTokenInInput(String),
    #[error("transition references unknown state {0:?}")]
    UnknownState(String),
    #[error("letter {letter:?} is not in the {alphabet} alphabet")]
    LetterNotInAlphabet { letter: String, alphabet: &'static str },
    #[error("duplicate state id {0:?}")]
    DuplicateState(String),
    #[error("duplicate transition {0}")]
    DuplicateTransition(String),
    #[error("invalid transducer: {0}")]
    Invalid(String),
    #[error("transducer is not deterministic: {0}")]
    NotDeterministic(String),
    #[error("transducer is not co-deterministic: {0}")]
    NotCodeterministic(String),
    #[error("transducer is not one-way")]
    NotOneWay,
    #[error("{which} transducer is not reversible")]
    NotReversible { which: &'static str },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("word of length {len} exceeds the enumeration bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("word {0:?} is not accepted")]
    WordNotAccepted(String),
    #[error("no valid slice at letter {0}")]
    NoValidSlice(String),
    #[error("transducer is not functional on {0:?}")]
    NotFunctional(String),
    #[error("substitution is not copyless: {0}")]
    NotCopyless(String),
    #[error("variable sets differ")]
    VariableSetMismatch,
    #[error("construction exceeds the state budget of {limit} states")]
    StateBudgetExceeded { limit: usize },
    #[error("malformed json: {0}")]
    MalformedJson(String),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
