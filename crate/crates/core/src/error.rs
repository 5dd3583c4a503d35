use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    #[error("invalid diagram automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("{what} exceeds the enumeration bound {bound}")]
    BoundExceeded { what: &'static str, bound: usize },

    #[error("{0} is not dominant")]
    NotDominant(String),

    #[error("base datum is not adjoint: simple roots do not form a basis of the character lattice")]
    NotAdjoint,

    #[error("relative semisimple rank is {0}, expected 1")]
    RelativeRankNotOne(usize),

    #[error("unsupported decomposition: {0}")]
    UnsupportedDecomposition(String),

    #[error("character extraction left a nonempty residual ({0} weights)")]
    ResidualNonEmpty(usize),

    #[error("malformed Levi subset: {0}")]
    MalformedLevi(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("mismatched ambient data: {0}")]
    MismatchedAmbient(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}
