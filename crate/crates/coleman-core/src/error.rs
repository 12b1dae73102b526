use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("operands live in different residue rings")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("series diverges (p = 2 or argument not a principal unit)")]
    Divergent,
    #[error("working precision too small for the requested radius")]
    PrecisionInsufficient,
    #[error("matrix is singular modulo p")]
    Singular,
    #[error("pivot is not a unit")]
    PivotNotUnit,
    #[error("element is not in the subgroup: {0}")]
    NotInSubgroup(&'static str),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("coordinates are not primitive")]
    NotPrimitive,
    #[error("table is not a character of (Z/p^r)^x")]
    NotACharacter,
    #[error("pair is not in the monoid E")]
    NotInE,
    #[error("character is not trivial on T0")]
    NotTrivialOnT0,
    #[error("purity relation violated")]
    RelationViolated,
    #[error("component character is not algebraic")]
    NonAlgebraic,
    #[error("enumeration budget exceeded")]
    BudgetExceeded,
}
