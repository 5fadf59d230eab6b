use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidGrid(String),
    NonFinite { index: usize },
    Shape(String),
    InvalidExponent(String),
    InvalidPerm(String),
    DegreeTooLarge { m: usize, max: usize },
    /// Dense evaluation would exceed the configured point budget.
    Budget { needed: usize, cap: usize },
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid(s) => write!(f, "invalid grid: {s}"),
            Error::NonFinite { index } => write!(f, "non-finite sample at flat index {index}"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::InvalidExponent(s) => write!(f, "invalid exponent: {s}"),
            Error::InvalidPerm(s) => write!(f, "invalid permutation: {s}"),
            Error::DegreeTooLarge { m, max } => write!(f, "degree m={m} exceeds supported maximum {max}"),
            Error::Budget { needed, cap } => {
                write!(f, "dense evaluation needs {needed} points, cap is {cap}; use slice evaluation")
            }
            Error::Precondition(s) => write!(f, "precondition violated: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
