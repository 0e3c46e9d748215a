use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("constraint {index}: weight {weight} is negative or not finite")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("constraint {index}: variable {var} out of range for n = {n}")]
    IndexOutOfRange { index: usize, var: usize, n: usize },
    #[error("expected only {expected} constraints, found {found} at position {index}")]
    MixedPredicates {
        expected: String,
        found: String,
        index: usize,
    },
    #[error("predicate {predicate} has no {family} set mapping")]
    UnsupportedPredicate {
        predicate: String,
        family: &'static str,
    },
    #[error("edge {index} does not run from a positive copy to a negative copy")]
    MalformedCover { index: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid sampler config: {0}")]
    InvalidConfig(String),
    #[error("{0} is not a partition of the vertex set")]
    NotAPartition(String),
    #[error("alphabet size {0} is below 3; no sum witness exists")]
    AlphabetTooSmall(usize),
    #[error("residue {a} out of range for alphabet size {k}")]
    ResidueOutOfRange { a: usize, k: usize },
    #[error("graph is not strongly asymmetric: {0}")]
    NotStronglyAsymmetric(String),
    #[error("edge index {index} out of range ({m} edges)")]
    EdgeOutOfRange { index: usize, m: usize },
    #[error("{0}")]
    InvalidEdge(String),
    #[error("n = {n} exceeds the enumeration cap of {cap}; use sampled verification instead")]
    EnumerationTooLarge { n: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
