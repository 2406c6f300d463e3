use std::fmt;

use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ballot space: {0}")]
    InvalidSpace(String),

    #[error("unknown candidate label `{0}`")]
    UnknownCandidate(String),

    #[error("candidate `{0}` listed more than once")]
    DuplicateCandidate(String),

    #[error("empty tier in ranking `{0}`")]
    EmptyTier(String),

    #[error("ranking `{0}` is not admissible in this ballot space")]
    Inadmissible(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty electorate: the profile has no voters")]
    EmptyElectorate,

    #[error("negative ballot count")]
    NegativeCount,

    #[error("dimension mismatch: expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objects belong to different ballot spaces")]
    SpaceMismatch,

    #[error("a normal vector must have at least one non-zero component")]
    ZeroVector,

    #[error("swap operator needs two distinct candidates, got {0} and {0}")]
    DegenerateSwap(usize),

    #[error("candidate index {0} out of range")]
    CandidateOutOfRange(usize),

    #[error("a condition needs at least one inequality")]
    EmptyCondition,

    #[error("stage {stage} is a Type 1 stage but is not the last stage of the method")]
    Type1NotFinal { stage: usize },

    #[error("mutual exclusivity violated in stage {stage}: conditions for {winners:?} hold simultaneously")]
    MutualExclusivity { stage: usize, winners: Vec<usize> },

    #[error("decisiveness violated: every stage passed without a winner or a tie")]
    Exhausted,

    #[error("weight vector too short: {needed} positions needed, {available} given")]
    WeightsTooShort { needed: usize, available: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a point system: {0}")]
    NotAPointSystem(String),

    #[error("method cannot decide ties: no tiebreak configured and tie skipping is disabled")]
    Indecisive,

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl fmt::Display) -> Self {
        Error::Parse {
            line,
            message: message.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
