use thiserror::Error;

/// Errors surfaced by the Ext engine and its supporting modules.
///
/// `UnsupportedFamily` is deliberately loud: a query the recursions cannot
/// reach is *not* the same as a vanishing Ext group, and callers must never
/// fold it into a zero vector.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Ext family: {0}")]
    UnsupportedFamily(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
