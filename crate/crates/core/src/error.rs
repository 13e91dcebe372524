use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Every failure the engine reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A denominator contains a factor outside the inverted set.
    Malformed(String),
    UnknownVariable(String),
    RingMismatch(String),
    NotUnit(String),
    Parse { pos: usize, msg: String },
    /// Scene data violates an invariant; one line per failure.
    Invalid(Vec<String>),
    TupleNotInAtlas(Vec<usize>),
    TruncationOverflow { len: usize, max: usize },
    Precondition(String),
    /// An identity that must hold by construction did not.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Malformed(m) => write!(f, "malformed element: {}", m),
            Error::UnknownVariable(v) => write!(f, "unknown variable '{}'", v),
            Error::RingMismatch(m) => write!(f, "ring mismatch: {}", m),
            Error::NotUnit(m) => write!(f, "not a unit: {}", m),
            Error::Parse { pos, msg } => write!(f, "parse error at {}: {}", pos, msg),
            Error::Invalid(items) => {
                write!(f, "invalid scene:")?;
                for i in items {
                    write!(f, "\n  {}", i)?;
                }
                Ok(())
            }
            Error::TupleNotInAtlas(t) => write!(f, "tuple {:?} not in atlas", t),
            Error::TruncationOverflow { len, max } => {
                write!(f, "truncation overflow: length {} exceeds N = {}", len, max)
            }
            Error::Precondition(m) => write!(f, "precondition failed: {}", m),
            Error::Internal(m) => write!(f, "internal consistency error: {}", m),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
