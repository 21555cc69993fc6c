use thiserror::Error;

use crate::bundles::ClassTable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("label `{0}` is reserved by this construction")]
    LabelCollision(String),

    #[error("point index {index} out of range for a space with {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("map is not order-preserving: {0}")]
    NotContinuous(String),

    #[error("map has {got} images but its domain has {expected} points")]
    ArityMismatch { expected: usize, got: usize },

    #[error("domain or codomain mismatch: {0}")]
    Mismatch(String),

    #[error("set is not open: {0}")]
    NotOpen(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("invalid weak natural transformation: {0}")]
    InvalidWeakNat(String),

    #[error("map is not over the base: {0}")]
    NotOverBase(String),

    #[error("bundle has no verified trivializations")]
    Unverified,

    #[error("invalid trivialization: {0}")]
    InvalidTrivialization(String),

    #[error("base must be a two-point chain")]
    NotTwoChain,

    #[error("search exceeded the node budget of {limit}")]
    BudgetExceeded { limit: u64 },

    #[error("classification inconclusive: node budget of {limit} exhausted")]
    ClassificationInconclusive { limit: u64, partial: Box<ClassTable> },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::ClassificationInconclusive { .. })
    }
}
