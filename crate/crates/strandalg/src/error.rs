use thiserror::Error;

/// Errors raised by domain-level preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("binomial arguments out of range: k = {k} > m = {m}")]
    BinomialRange { m: u32, k: u32 },

    #[error("word is not reduced: length {len} but permutation has {inversions} inversions")]
    NonReducedWord { len: usize, inversions: usize },

    #[error("dot at position {pos} sits on a fermionic strand of sequence {seq}")]
    DotOnFermionicStrand { pos: usize, seq: String },

    #[error("token position {pos} out of range for sequence of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("ambient mismatch: ({0}, {1}) vs ({2}, {3})")]
    AmbientMismatch(usize, usize, usize, usize),

    #[error("sequences have different type counts: {0} vs {1}")]
    TypeCountMismatch(String, String),

    #[error("element is not an idempotent")]
    NotIdempotent,

    #[error("operation requires ambient with {0}")]
    AmbientConstraint(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
