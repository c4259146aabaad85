use thiserror::Error;

/// Errors raised by the solvers and the harness.
///
/// Indices carried by variants are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrtError {
    #[error("moduli at positions {i} and {j} are not coprime")]
    NotCoprime { i: usize, j: usize },

    #[error("modulus at position {index} is not positive")]
    NonPositiveModulus { index: usize },

    #[error("empty moduli list")]
    EmptyModuli,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("remainders are not congruent modulo d (positions {i} and {j} differ)")]
    Inconsistent { i: usize, j: usize },

    #[error("value lies outside the dynamic range")]
    OutOfRange,

    #[error("remainder at position {index} is outside [0, d*m_i)")]
    RemainderOutOfRange { index: usize },

    #[error("high-spread branch selected but no residue exceeds d/2")]
    DegenerateStats,

    #[error("quotient for position {index} is not an exact integer")]
    NonExactQuotient { index: usize },

    #[error("denominator must be non-zero")]
    ZeroDenominator,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, CrtError>;
