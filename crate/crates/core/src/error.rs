use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero in F_{q}")]
    DivisionByZero { q: u32 },

    #[error("unsupported field size q = {0} (need a prime power q <= 16)")]
    UnsupportedField(u32),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("bound exceeded: {what} = {value} > {limit}")]
    BoundExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("subspace is not invariant under the given matrix")]
    NotInvariant,

    #[error("matrix is not a single generalized Jordan block: {0}")]
    NotSingleBlock(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("could not identify irreducible character: {0}")]
    UnidentifiedIrrep(String),

    #[error("N = {n} is too small, need N >= {min}")]
    TooSmallN { n: usize, min: usize },

    #[error("polynomial fit failed: {0}")]
    FitFailure(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn bound(what: &'static str, value: impl TryInto<u128>, limit: impl TryInto<u128>) -> Self {
        Error::BoundExceeded {
            what,
            value: value.try_into().unwrap_or(u128::MAX),
            limit: limit.try_into().unwrap_or(u128::MAX),
        }
    }
}
