use thiserror::Error;

/// Errors raised by the verification library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("unknown atom '{0}' (not in the net alphabet)")]
    UnknownAtom(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid model:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("node budget of {0} exhausted while building the Karp-Miller tree")]
    BudgetExhausted(usize),

    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,

    #[error("subset construction exceeded {0} states")]
    StateLimit(usize),

    #[error("omega outputs are not supported by {0}")]
    OmegaOutputs(&'static str),

    #[error("integer solver gave up after {0} branch-and-bound nodes")]
    SolverLimit(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
