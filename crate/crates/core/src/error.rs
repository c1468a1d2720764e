use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: characteristic {left} vs {right}")]
    FieldMismatch { left: u64, right: u64 },
    #[error("characteristic {0} is neither 0 nor a prime")]
    NotPrime(u64),
    #[error("group too large: closure exceeds the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("presentation mismatch")]
    PresentationMismatch,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("algebra is not finite-dimensional in degrees [{lo}, {hi}]")]
    NotLocallyFinite { lo: i64, hi: i64 },
    #[error("invalid degree window [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("transfer unavailable: characteristic {characteristic} divides |G| = {order}")]
    TransferUnavailable { characteristic: u64, order: usize },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("{0}")]
    Input(String),
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
