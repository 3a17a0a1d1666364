use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials live over different alphabets")]
    AlphabetMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("derivative of {0} leaves the truncated ring")]
    TruncationExceeded(String),
    #[error("graded piece is infinite: {0}")]
    InfinitePiece(String),
    #[error("family `{0}` has no representation label")]
    MissingRepLabel(String),
    #[error("invalid rank {0} for {1}")]
    InvalidRank(usize, &'static str),
    #[error("subspace is not closed under the action")]
    NotActionClosed,
    #[error("generator {0} is not invariant")]
    NotInvariant(usize),
    #[error("state lies outside the subalgebra without underived gamma")]
    OutsideBarSubalgebra,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid family spec: {0}")]
    InvalidFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
