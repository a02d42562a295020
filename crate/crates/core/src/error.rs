use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid recurrence order {0}: k must be at least {1}")]
    InvalidOrder(usize, usize),

    #[error("recurrence of order {order} needs {order} {what}, got {got}")]
    LengthMismatch {
        order: usize,
        what: &'static str,
        got: usize,
    },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(String),

    #[error("index {index} is outside the available terms {start}..={end}")]
    IndexOutOfRange { index: i64, start: usize, end: i64 },

    #[error("identity `{form}` is only asserted for n >= {min_n}, got n = {n}")]
    BelowMinimum {
        form: String,
        n: usize,
        min_n: usize,
    },

    #[error("identity `{form}` needs {needed} term vectors, got {got}")]
    MissingTerms {
        form: String,
        needed: usize,
        got: usize,
    },

    #[error("{value} is not divisible by {divisor}")]
    NotDivisible { value: String, divisor: String },

    #[error("series has no nonzero coefficient through x^{0}; it is not invertible")]
    NotInvertible(i64),

    #[error("coefficient of x^{exp} is {value}, which is not an integer")]
    NotIntegral { exp: i64, value: String },

    #[error("polynomial must be nonzero with degree >= {0}")]
    DegeneratePolynomial(usize),

    #[error("theta = {0} is excluded (must differ from 0 and 1)")]
    ExcludedTheta(String),

    #[error("invalid k range {0}..={1}: lower bound must be >= 2 and not above the upper bound")]
    InvalidKRange(usize, usize),

    #[error("unknown check or form name `{0}`")]
    UnknownForm(String),

    #[error("line {line}: malformed b-file entry `{text}`")]
    MalformedLine { line: usize, text: String },

    #[error("line {line}: index {index} does not follow {previous}")]
    NonMonotonic {
        line: usize,
        index: i64,
        previous: i64,
    },

    #[error("line {line}: index {index} leaves a gap after {previous}")]
    NonContiguous {
        line: usize,
        index: i64,
        previous: i64,
    },

    #[error("no overlap between b-file indices and computed values")]
    EmptyOverlap,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
