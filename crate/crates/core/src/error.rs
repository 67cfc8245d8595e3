use thiserror::Error;

use crate::game::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),

    #[error("{what} exceeds budget of {limit}")]
    BudgetExceeded { what: String, limit: u64 },

    #[error("builder mode violation: {0}")]
    ModeViolation(String),

    #[error("edge {0:?} has already been played")]
    DuplicateEdge(Vec<VertexId>),

    #[error("edge has {got} vertices, expected {expected}")]
    Arity { expected: usize, got: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("color {color} out of range for {t} colors")]
    ColorOutOfRange { color: usize, t: usize },

    #[error("a move is already awaiting its color")]
    MovePending,

    #[error("no move is awaiting a color")]
    NoPendingMove,

    #[error("the game is already over")]
    GameOver,

    #[error("name supply of {supply} exhausted")]
    SupplyExhausted { supply: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed coloring: {0}")]
    MalformedColoring(String),

    #[error("malformed transcript: {0}")]
    Transcript(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors that indicate a bug rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}
