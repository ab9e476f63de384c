use thiserror::Error;

/// Errors raised across the library.
///
/// Variants fall into three groups, which the CLI maps onto exit codes:
/// malformed or out-of-domain input, resource-bound rejections, and
/// internal invariant violations (which indicate a bug or a falsified
/// mathematical assumption and should never be silenced).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported (field order must be odd)")]
    EvenCharacteristic,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("the polynomial x is excluded here")]
    PolynomialIsX,
    #[error("field of order {0} is not of square order")]
    NotSquareOrder(u64),
    #[error("{what}: gcd({a}, {b}) != 1")]
    NotCoprime { what: &'static str, a: u128, b: u128 },
    #[error("mismatched fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid class data: {0}")]
    InvalidClassData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("bound exceeded: {what} is {value}, limit {limit}")]
    BoundExceeded {
        what: &'static str,
        value: String,
        limit: String,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn bound(what: &'static str, value: impl ToString, limit: impl ToString) -> Self {
        Error::BoundExceeded {
            what,
            value: value.to_string(),
            limit: limit.to_string(),
        }
    }

    /// True for rejections caused by configured size limits rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }

    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
