use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in three families: invalid input (dimension problems,
/// non-unimodular generators, unknown names), resource limits
/// ([`Error::CapExceeded`]) and internal invariant breaches
/// ([`Error::CoflasquenessViolated`], [`Error::Internal`]), which indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("generator `{name}` is not unimodular")]
    NonUnimodularGenerator { name: String },

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("group closure exceeds the element cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("action does not respect the group law: {0}")]
    NotAHomomorphism(String),

    #[error("lattices are defined over different groups")]
    GroupMismatch,

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("unsupported Del Pezzo degree {0} (only 5 and 6)")]
    UnsupportedDegree(u32),

    #[error("vector is not a root: self-intersection is {0}, expected -2")]
    NotARoot(String),

    #[error("map is not surjective")]
    NotSurjective,

    #[error("map is not injective with saturated image")]
    NotInjective,

    #[error("resolution carries no splitting")]
    MissingSplitting,

    #[error("kernel of the resolution is not coflabby: H^1 nonzero for {0}")]
    CoflasquenessViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
