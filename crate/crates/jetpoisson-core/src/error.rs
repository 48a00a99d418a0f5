//! Error type shared by all engine operations.

use alloc::string::String;
use core::fmt;

/// Failure modes of the exact-arithmetic operations.
///
/// Every fallible operation returns `Result<_, Error>`; panics are reserved
/// for internal invariant violations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands have incompatible shapes: mismatched variable counts,
    /// truncation orders, or matrix/map dimensions.
    Shape(String),
    /// An inverse was requested of something that is not a unit
    /// (series without an invertible leading monomial, singular matrix,
    /// non-invertible linear part, zero denominator).
    Unit(String),
    /// A value was requested outside the domain where it is defined
    /// (negative power of zero, coefficient beyond the certified degree,
    /// invalid index).
    Domain(String),
    /// An input parameter is outside the supported range
    /// (wrong dimension for a specialized routine, empty budget, bad degree).
    Input(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Unit(msg) => write!(f, "not a unit: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Shorthand used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
