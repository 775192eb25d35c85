//! Error type shared by every module of the core crate.

use alloc::string::String;
use core::fmt;

/// Failures raised by validation and by the pairing engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The field size is not an odd prime power.
    InvalidField(String),
    /// A partition, label or rank is malformed.
    InvalidInput(String),
    /// The semisimple element does not lie in the given dual torus.
    NotInTorus(String),
    /// A Weyl group element does not lie in the F-centralizer.
    NotInCentralizer,
    /// An orthogonal pair has the eigenvalue 1 or -1.
    HypothesisViolation { orbit: String },
    /// A brute-force enumeration would exceed its bound.
    BoundExceeded { requested: u64, limit: u64 },
    /// A quantity that must be integral is not.
    NonIntegral(String),
    /// The requested operation is not available for this group family.
    Unsupported(String),
}

/// Result alias for the core crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidField(m) => write!(f, "invalid field: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::NotInTorus(m) => write!(f, "element not in dual torus: {m}"),
            Error::NotInCentralizer => write!(f, "Weyl element not in the F-centralizer"),
            Error::HypothesisViolation { orbit } => write!(
                f,
                "hypothesis violated: eigenvalue orbit {orbit} is excluded for orthogonal pairs"
            ),
            Error::BoundExceeded { requested, limit } => {
                write!(f, "enumeration size {requested} exceeds the bound {limit}")
            }
            Error::NonIntegral(m) => write!(f, "non-integral value: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl core::error::Error for Error {}
