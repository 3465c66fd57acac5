use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("recurrence parameter A = {0} is out of range (need A >= {1})")]
    ParameterOutOfRange(String, u64),

    #[error("surd radicands differ ({0} vs {1})")]
    RadicandMismatch(String, String),

    #[error("radicand {0} must be at least 2 and not a perfect square")]
    BadRadicand(String),

    #[error("product does not stay in the half-integer surd form")]
    NonExactHalving,

    #[error("base must be greater than 1")]
    BaseNotGreaterThanOne,

    #[error("integer overflow in fixed-width arithmetic")]
    Overflow,

    #[error("size parameter X must be at least 1")]
    ZeroSize,

    #[error("coefficients violate C1*C2*C3 != 0")]
    DegenerateCoefficients,

    #[error("leading coefficient vanishes after merging n1 = n4 (C1 = C4)")]
    DegenerateLeadingTerm,

    #[error("leading coefficient A1 must be nonzero")]
    ZeroLeadingCoefficient,

    #[error("A range [{lo}, {hi}] is outside [3, {cap}]")]
    RangeOutsideCap { lo: u64, hi: u64, cap: u64 },

    #[error("malformed family record: {0}")]
    MalformedFamily(String),

    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    #[error("index {0} is past the end of the table")]
    IndexOutOfTable(usize),
}
