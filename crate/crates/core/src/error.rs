use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n = {n} exceeds the enumeration limit of {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("divisibility violated: {0}")]
    Divisibility(String),

    #[error("non-integral result: {0}")]
    Exactness(String),

    #[error("block structure violated: {0}")]
    BlockStructure(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
