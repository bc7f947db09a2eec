//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Group-element, step, or box dimension does not match the ambient `d`.
    DimMismatch { expected: usize, got: usize },
    /// An exponential was given a zero component; `m(x)` would be undefined
    /// for negative coordinates.
    ZeroLambda,
    /// Syntax error in expression or scalar text.
    Parse { pos: usize, msg: String },
    /// A stated precondition of an operation does not hold.
    Invalid(String),
    /// The sample window is too short to certify a minimal recurrence: the
    /// fitted order is still growing with the window.
    WindowTooSmall { order_half: usize, order_full: usize },
    /// The characteristic polynomial of the samples has an irreducible factor
    /// with no root in `Q(i)`; the factor is reported in expression syntax.
    SpectrumOutsideField { factor: String },
    /// The samples satisfy a recurrence with a zero characteristic root, so
    /// they are not the restriction of any exponential polynomial.
    ZeroCharacteristicRoot,
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::ZeroLambda => write!(f, "malformed exponential: zero lambda component"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::Invalid(msg) => write!(f, "{msg}"),
            Error::WindowTooSmall { order_half, order_full } => write!(
                f,
                "window too small: recurrence order grew from {order_half} to {order_full}"
            ),
            Error::SpectrumOutsideField { factor } => {
                write!(f, "spectrum outside scalar field: irreducible factor {factor}")
            }
            Error::ZeroCharacteristicRoot => {
                write!(f, "samples admit a zero characteristic root; not an exponential polynomial")
            }
        }
    }
}

impl std::error::Error for Error {}
