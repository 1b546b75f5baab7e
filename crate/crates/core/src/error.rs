use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    /// A computed identity that must hold exactly did not; indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    /// A published inequality failed its certified check.
    #[error("inequality violated: {0}")]
    Inequality(String),
    #[error("family check failed: {0}")]
    Family(String),
    #[error("reduction failed: {0}")]
    Reduction(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
