use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The characteristic handed to a field constructor is not prime.
    NotPrime(u64),
    /// Extension degree must be at least one.
    BadExtensionDegree(u32),
    /// `p^m` does not fit the element representation.
    FieldTooLarge { p: u64, m: u32 },
    /// A supplied modulus is not monic, has the wrong degree, or is reducible.
    BadModulus(String),
    /// A value is not a valid element of the field it was used with.
    BadElement(String),
    DivisionByZero,
    FieldMismatch,
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    NotSquare { rows: usize, cols: usize },
    /// Row or column selection out of range or not strictly increasing.
    BadIndex(String),
    /// Column degree requested for an identically zero column.
    ZeroColumn(usize),
    /// Polynomial matrix does not have full column rank over `F(s)`.
    RankDeficient,
    /// High-order coefficient matrix is not of full rank.
    NotMinimal,
    /// The maximal minors share a non-constant common factor.
    NotSummand,
    InvalidParams(String),
    /// A realization failed reachability or observability.
    NotMinimalRealization,
    NotReachable,
    DegreeMismatch { expected: usize, found: usize },
    /// Exhaustive work would exceed the configured budget.
    Infeasible { cost: u128, budget: u128 },
    /// Rejection sampling ran out of retries; a larger field is needed.
    FieldTooSmall { retries: usize },
    /// Randomized search exhausted every field of its ladder.
    SearchExhausted { trials: usize },
    /// An invariant guaranteed by construction failed.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::BadExtensionDegree(m) => write!(f, "extension degree {m} must be at least 1"),
            Error::FieldTooLarge { p, m } => write!(f, "field of order {p}^{m} is too large"),
            Error::BadModulus(msg) => write!(f, "bad field modulus: {msg}"),
            Error::BadElement(msg) => write!(f, "bad field element: {msg}"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::FieldMismatch => f.write_str("operands belong to different fields"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Error::BadIndex(msg) => write!(f, "bad index: {msg}"),
            Error::ZeroColumn(j) => write!(f, "column {j} is identically zero"),
            Error::RankDeficient => f.write_str("polynomial matrix is not of full column rank"),
            Error::NotMinimal => f.write_str("high-order coefficient matrix is rank deficient"),
            Error::NotSummand => f.write_str("maximal minors have a non-unit common divisor"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::NotMinimalRealization => {
                f.write_str("realization is not both reachable and observable")
            }
            Error::NotReachable => f.write_str("pair (A, B) is not reachable"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::Infeasible { cost, budget } => {
                write!(f, "infeasible: cost {cost} exceeds budget {budget}")
            }
            Error::FieldTooSmall { retries } => {
                write!(f, "field too small: no admissible completion after {retries} retries")
            }
            Error::SearchExhausted { trials } => {
                write!(f, "search exhausted the field ladder after {trials} trials")
            }
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
