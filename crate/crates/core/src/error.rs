use alloc::string::String;
use core::fmt;

use crate::vec2::Vec2;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed or non-finite input.
    Input(String),
    /// Evaluation at the origin where the quantity is undefined.
    Singularity,
    /// The operation needs a smooth norm.
    Unsupported(String),
    /// A sampled structural hypothesis failed.
    Validation { what: String, sample: Vec2, residual: f64 },
    /// Quadrature, root finding or an iterative search did not converge.
    Numeric(String),
    /// No real solution exists for the requested construction.
    Infeasible(String),
    /// A cut leaves the domain or splits off a degenerate piece.
    Geometry(String),
    /// Queried a frame or contact condition at a boundary corner.
    Corner { s: f64 },
    /// A documented precondition does not hold.
    Precondition(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Singularity => write!(f, "evaluated at the origin"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Validation {
                what,
                sample,
                residual,
            } => write!(
                f,
                "validation failed ({what}) at ({}, {}) with residual {residual:e}",
                sample.x, sample.y
            ),
            Error::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Geometry(msg) => write!(f, "geometry error: {msg}"),
            Error::Corner { s } => write!(f, "boundary corner at parameter {s}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
