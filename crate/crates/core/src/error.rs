use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    Domain(String),
    /// An exhaustive enumeration was requested beyond the feasibility guard.
    TooLarge { chords: usize, points: usize },
    /// The supplied relations contain a cycle, so they do not generate a strict order.
    NotAPoset { a: usize, b: usize },
    /// An exact identity that must hold by construction did not; this is a bug.
    Inconsistent(String),
    /// A scalar field specification could not be parsed or evaluated.
    Field(String),
    /// A textual diagram could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::TooLarge { chords, points } => write!(
                f,
                "enumeration of {chords} chords on {points} points is too large"
            ),
            Error::NotAPoset { a, b } => {
                write!(f, "not a poset: elements {a} and {b} precede each other")
            }
            Error::Inconsistent(msg) => write!(f, "internal consistency failure: {msg}"),
            Error::Field(msg) => write!(f, "field error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}
pub(crate) use domain;
