use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is zero to its truncation order; no leading term to invert")]
    ZeroLeadingTerm,
    #[error("requested order {requested} exceeds the available truncation order {available}")]
    OrderTooLarge { requested: String, available: String },
    #[error("order must be positive, got {0}")]
    OrderTooSmall(String),
    #[error("divergent product: {0}")]
    Divergent(String),
    #[error("matrix AD is not symmetric")]
    NonSymmetric,
    #[error("matrix AD is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("z-window overflow: {0}")]
    WindowOverflow(String),
    #[error("exponents do not lie on an integral lattice: {0}")]
    NotIntegralLattice(String),
    #[error("product exponent a_{n} = {value} is not an integer")]
    NonIntegralExponent { n: usize, value: String },
    #[error("q -> -q twist leaves a non-real coefficient at exponent {0}")]
    NonRealTwist(String),
    #[error("substitution has no finite exactness order: {0}")]
    UnboundedSubstitution(String),
    #[error("tail bound {bound:e} is too large for tolerance {tol:e}")]
    TailTooLarge { bound: f64, tol: f64 },
    #[error("tau must lie in the upper half-plane, got im = {0}")]
    InvalidTau(f64),
    #[error("unknown identity id `{0}`")]
    UnknownId(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
