use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Certificate violations are errors too: they mean a claimed inequality failed on
/// a concrete run and carry enough context to reproduce it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed instance: {0}")]
    Malformed(String),

    #[error("arrival {arrival}: offline index {index} out of range (offline count {offline})")]
    IndexOutOfRange {
        arrival: usize,
        index: u64,
        offline: usize,
    },

    #[error("arrival {arrival}: duplicate offline index {index}")]
    DuplicateIndex { arrival: usize, index: u32 },

    #[error("arrival {arrival}: empty neighbor set")]
    EmptyArrival { arrival: usize },

    #[error("arrival {arrival}: degree {degree} exceeds the supported maximum of 2")]
    DegreeTooLarge { arrival: usize, degree: usize },

    #[error("offline vertex count must be positive")]
    NoOfflineVertices,

    #[error("permutation size {got} does not match offline count {expected}")]
    PermutationSize { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent copy map: {0}")]
    InconsistentCopyMap(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("state-space guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("level overflow: {p1} + {p2} + 1 exceeds the level cap {cap}")]
    LevelOverflow { p1: u32, p2: u32, cap: u32 },

    #[error("comparison against eta undecidable with {terms} series terms")]
    Undecidable { terms: u32 },

    #[error("certificate violation: {0}")]
    Certificate(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
