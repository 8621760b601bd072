use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} states, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },

    #[error("letter index {index} out of range ({letters} letters)")]
    InvalidLetter { index: usize, letters: usize },

    #[error("{n} states exceeds the cap of {cap} for {what}; use a heuristic method instead")]
    TooManyStates {
        n: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("transformation has rank {rank}, expected {expected}")]
    WrongRank { rank: usize, expected: usize },

    #[error("letter `{0}` is not a permutation")]
    NotPermutation(String),

    #[error("invalid automaton: {0}")]
    InvalidDfa(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("automaton is not synchronizing")]
    NotSynchronizing,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
