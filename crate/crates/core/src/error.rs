use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{e} exceeds the 2^31 cap")]
    ModulusTooLarge { p: u64, e: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("level {level} outside the allowed range for exponent {e}")]
    BadLevel { level: u32, e: u32 },
    #[error("element order exceeds bound {0}")]
    OrderExceedsBound(u64),
    #[error("group of predicted order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u64 },
    #[error("rank search exceeded its budget of {0} steps")]
    SearchBudgetExceeded(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid rank witness: {0}")]
    InvalidWitness(String),
    #[error("space too large to enumerate: estimated work {work} exceeds cap {cap}")]
    SpaceTooLarge { work: u128, cap: u128 },
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("commutator of monomials is not a scalar: {0}")]
    NonScalarCommutator(String),
    #[error("zero element has no leading term")]
    ZeroElement,
    #[error("check {check}: {source}")]
    InCheck { check: String, source: Box<Error> },
}

impl Error {
    /// Whether the error comes from a size cap or bad parameters rather than
    /// a failed verification.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::InCheck { source, .. } => source.is_infeasible(),
            Error::NonScalarCommutator(_) | Error::InvalidWitness(_) => false,
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
