//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by constructors and checkers.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A vector or matrix does not match the dimension of its space.
    DimensionMismatch { expected: usize, found: usize },
    /// An argument violates a documented precondition.
    InvalidArgument(String),
    /// `(lambda - A)` is singular, so the resolvent does not exist there.
    ResolventUndefined { lambda: f64 },
    /// A user-supplied growth bound `(M, omega)` fails its validation grid;
    /// carries the worst offending time and the signed slack there.
    InvalidBound {
        m: f64,
        omega: f64,
        t: f64,
        slack: f64,
    },
    /// A checker was invoked with a constant that does not satisfy its
    /// own hypothesis (the generator-gap bound).
    HypothesisNotSatisfied { minimal_c2: f64, constant: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ResolventUndefined { lambda } => {
                write!(f, "resolvent undefined: (lambda - A) is singular at lambda = {lambda}")
            }
            Error::InvalidBound { m, omega, t, slack } => write!(
                f,
                "invalid bound: (M, omega) = ({m}, {omega}) violated at t = {t} with slack {slack}"
            ),
            Error::HypothesisNotSatisfied { minimal_c2, constant } => write!(
                f,
                "hypothesis not satisfied: minimal gap constant {minimal_c2} exceeds supplied constant {constant}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
