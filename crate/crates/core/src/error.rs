use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in finite field")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("polynomial division by zero")]
    PolyDivByZero,
    #[error("constant polynomial has no irreducibility status")]
    ConstantPolynomial,
    #[error("not integral at the place")]
    NotIntegral,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("insufficient precision: needed {needed} digits, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },
    #[error("enumeration of {count} points exceeds cap {cap}")]
    EnumerationCap { count: u128, cap: u128 },
    #[error("point is not periodic of period {0}")]
    NotPeriodic(usize),
    #[error("Newton hypothesis violated: ord f(x0) = {f_val}, ord f'(x0) = {df_val}")]
    NewtonHypothesis { f_val: i64, df_val: i64 },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("polynomial is reducible")]
    Reducible,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cocycle condition fails at periodic point {point} (period {period})")]
    CocycleViolation { point: String, period: usize },
    #[error("vanishing value in table at residue {0}")]
    VanishingValue(usize),
    #[error("invalid digit set: {0}")]
    InvalidDigitSet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
