use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into two families: input/validation problems (bad
/// permutations, caps, malformed categories) and [`Error::Consistency`],
/// which signals that a mathematical self-check failed and therefore
/// indicates a bug rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported modulus {0}: expected one of 2, 3, 5, 7")]
    UnsupportedPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid permutation {text:?}: {reason}")]
    InvalidPermutation { text: String, reason: String },

    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("{0} is not a p-group for p = {1}")]
    NotPGroup(String, u32),

    #[error("degree {degree} out of range (maximum {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures of mathematical self-checks (as opposed to bad input).
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
