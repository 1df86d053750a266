use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("polynomial parse error: {0}")]
    Parse(String),
    #[error("x^{n} - {m} is reducible over Q")]
    Reducible { n: u64, m: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("L_p(d) undefined without p-regularity")]
    NotRegular,
    #[error("invalid digit {digit} for digit set [{low}, {high}]")]
    InvalidDigit { digit: i64, low: i64, high: i64 },
}
