use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown instance name: {0}")]
    UnknownInstance(String),

    #[error("decode failure")]
    DecodeFailure,

    #[error("decrypt failure")]
    DecryptFailure,

    /// RQC decryption can never fail under valid parameters; seeing this
    /// means the implementation itself is broken.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("malformed data: {0}")]
    Malformed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
