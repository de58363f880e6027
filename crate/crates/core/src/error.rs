use thiserror::Error;

/// Errors raised by system construction, reduction and completion.
///
/// Monomials and elements inside diagnostics are rendered with the
/// system's generator names at the point the error is raised.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("monomials belong to different theories")]
    TheoryMismatch,

    #[error("operation `{op}` is not available for the {theory} theory")]
    WrongTheory { op: &'static str, theory: &'static str },

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("coefficient {0} is not invertible in the coefficient field")]
    CoefficientNotInvertible(String),

    #[error("cannot orient the zero element")]
    ZeroElement,

    #[error("leading monomials are incomparable: {}", .0.join(", "))]
    MultipleMaxima(Vec<String>),

    #[error("rule {rule}: lower part not below lead (offending monomial {monomial})")]
    RuleNotCompatible { rule: String, monomial: String },

    #[error("rule {rule}: path rule is not uniform ({monomial} has different endpoints)")]
    NonUniformRule { rule: String, monomial: String },

    #[error("rule {rule}: {reason}")]
    InvalidRule { rule: String, reason: String },

    #[error("rule {rule} is inadmissible in series mode: {reason}")]
    Inadmissible { rule: String, reason: String },

    #[error("order is not certified TDCC for these weights: {0}")]
    NotCertified(String),

    #[error("step budget of {0} reductions exceeded")]
    StepBudgetExceeded(usize),

    #[error("precision must be at least 1, got {0}")]
    InvalidPrecision(u32),

    #[error("series-mode system needs a precision; use truncated normal forms")]
    SeriesModeRequiresPrecision,

    #[error("operation requires a well-founded (discrete-mode) order")]
    DiscreteModeRequired,

    #[error("system is not confluent")]
    NotConfluentSystem,

    #[error("cannot orient remainder {0}: incomparable leading monomials")]
    OrientationFailed(String),

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
