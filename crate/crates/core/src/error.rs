use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid parameters: {0}")]
    InvalidParams(String),
    #[error("the root vertex has no ring neighbours")]
    RootHasNoRing,
    #[error("the root vertex has no parent")]
    RootHasNoParent,
    #[error("invalid address `{0}`")]
    InvalidAddress(String),
    #[error("could not derive a type table: {0}")]
    TableDerivation(String),
    #[error("bound search exceeded {0} expansions without pruning")]
    BoundSearchOverflow(usize),
    #[error("template has {0} vertices, at most 4 are supported")]
    TemplateTooLarge(usize),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("vertex at depth {depth} lies outside the ball of radius {radius}")]
    OutOfBall { depth: u32, radius: u32 },
    #[error("this segment tree graph has no type keys")]
    NotRegular,
    #[error("the counter was bulk initialised and no longer accepts updates")]
    Frozen,
    #[error("bulk initialisation needs a fresh counter")]
    NotFresh,
    #[error("the counter does not support this query: {0}")]
    UnsupportedQuery(String),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("enumeration of {0} maps is too large")]
    TooLarge(u128),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
