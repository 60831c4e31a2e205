use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("epsilon is not an integer for ages {0}+{1}-{2}")]
    NonIntegralEpsilon(usize, usize, usize),
    #[error("generator index {index} out of range for {generators} generators")]
    IndexOutOfRange { index: usize, generators: usize },
    #[error("relations are linearly dependent")]
    DependentRelations,
    #[error("partition does not coarsen the orbits of the source: {0}")]
    NotCoarsening(String),
    #[error("action is not closed under composition: {0}")]
    ActionNotClosed(String),
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("invalid base Betti vector: {0}")]
    InvalidBetti(String),
    #[error("element does not belong to this ring: {0}")]
    RingMismatch(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;
