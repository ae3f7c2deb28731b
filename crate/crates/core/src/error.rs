use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug)]
pub enum Error {
    /// An argument fell outside the range an operation is defined on.
    DomainArgument(String),
    /// A domain or symbol spec failed validation; the message names the offending field.
    InvalidSpec(String),
    /// The operation requires a complete Reinhardt domain (nonincreasing profile).
    IncompleteDomain,
    /// The operation requires a hypothesis (e.g. convexity) the domain does not satisfy.
    HypothesisViolation(String),
    /// The requested operation is not available for this domain kind.
    Unsupported(String),
    /// Bad shell-scan bounds.
    ScanBounds(String),
    /// A moment cache file was malformed or belongs to a different domain.
    CacheFormat(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DomainArgument(msg) => write!(f, "argument out of range: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid spec: {msg}"),
            Error::IncompleteDomain => {
                write!(f, "domain is not complete (profile increases somewhere)")
            }
            Error::HypothesisViolation(msg) => write!(f, "hypothesis violation: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::ScanBounds(msg) => write!(f, "bad scan bounds: {msg}"),
            Error::CacheFormat(msg) => write!(f, "bad cache file: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
