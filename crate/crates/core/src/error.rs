//! Error and violation types shared across the crate.
//!
//! Two kinds of failure are kept apart on purpose:
//!
//! - [`Error`] — an *operation* was called with inputs outside its domain
//!   (mismatched shapes, reversed index pairs, out-of-window shifts).
//! - [`Violation`] — a *value* failed validation; carries a human-readable
//!   description of the first broken constraint, suitable for machine
//!   reports (the CLI serializes it verbatim).

use alloc::string::String;
use core::fmt;

/// Failure of an operation on otherwise well-formed values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    /// Shapes or lengths cannot be combined (matrix products, span tests,
    /// class-vector lengths).
    Shape(String),
    /// An argument lies outside the operation's domain (i > j index pairs,
    /// constants below their lower bound, inadmissible sequences).
    Argument(String),
    /// The input value itself is invalid; wraps the first violation found.
    Invalid(Violation),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Invalid(v) => write!(f, "invalid input: {v}"),
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}

/// First violated constraint found while validating a value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
