//! Error type shared across the crate.

use std::fmt;

/// Errors produced by configuration, API contracts, numerical routines, and I/O.
#[derive(Debug)]
pub enum Error {
    /// Invalid configuration: bad grid size, out-of-range parameter, malformed
    /// or unknown config field. The message names the offending field.
    Config(String),
    /// A caller broke an API contract (unnormalized wavefunction, mismatched
    /// grids, missing level).
    Contract(String),
    /// A numerical procedure failed (inverse iteration stagnated, eigenvalue
    /// brackets collapsed, state selection found no candidate).
    Numerical(String),
    /// File I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
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
