use thiserror::Error;

/// Errors raised by series arithmetic, form construction and the operators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no common validity range")]
    NoCommonWindow,

    #[error("coefficient not computed to requested precision (exponent {exponent}, bound {bound})")]
    NotComputed { exponent: i64, bound: i64 },

    #[error("non-unit series: leading coefficient is zero")]
    NonUnit,

    #[error("modulus not invertible against denominator at exponent {exponent}")]
    ModulusNotInvertible { exponent: i64 },

    #[error("eta quotient has fractional q-power ({numerator}/24)")]
    FractionalPower { numerator: i64 },

    #[error("scale {scale} does not divide level {level}")]
    ScaleNotDividingLevel { scale: u64, level: u64 },

    #[error("constant outside value domain: odd prime {prime} appears to a fractional power")]
    ConstantOutsideDomain { prime: u64 },

    #[error("not in span: residual nonzero at exponent {exponent}")]
    NotInSpan { exponent: i64 },

    #[error("not polynomial in Hauptmodul of stated degree: residual nonzero at exponent {exponent}")]
    NotPolynomialInHauptmodul { exponent: i64 },

    #[error("basis is linearly dependent on the available window")]
    DependentBasis,

    #[error("oracle scale exceeded: n = {n} is above the ceiling {ceiling}")]
    OracleScaleExceeded { n: i64, ceiling: i64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("{0} is not a squarefree positive integer")]
    NotSquarefree(i64),

    #[error("series is not supported on multiples of {step}: exponent {exponent} is nonzero")]
    NotDecimable { step: u64, exponent: i64 },

    #[error("unknown form: {0}")]
    UnknownForm(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
