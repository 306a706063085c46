use thiserror::Error;

/// Errors raised by construction, queries and (de)serialization.
///
/// "Not found" outcomes of searches are not errors; they come back as `None`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range 1..={len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: usize, hi: usize },

    #[error("position {0} does not hold an opening parenthesis")]
    NotAnOpening(usize),

    #[error("position {0} does not hold a closing parenthesis")]
    NotAClosing(usize),

    #[error("node {0} is a leaf")]
    Leaf(usize),

    #[error("sequence is not balanced: {0}")]
    Unbalanced(String),

    #[error("unsupported chunk width {0} (expected 8 or 16)")]
    ChunkWidth(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("operation needs min-count fields, but the index was built without them")]
    CountsNotStored,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("corrupt index file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
