use thiserror::Error;

/// Error taxonomy shared across the crate.
///
/// `Capacity` guards memory (grid too large, brute-force enumeration too
/// wide), `Domain` rejects inputs outside an operation's precondition, and
/// `Usage` flags structurally invalid combinations (wrong scheme for a
/// dimension, malformed partitions, ...).
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
