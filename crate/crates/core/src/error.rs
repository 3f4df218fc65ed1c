//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coupling pair ({a}, {b}) for length {n}")]
    BadPair { a: usize, b: usize, n: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("coupling sequence is not SC-decodable: pair {index} ({a}, {b}) mixes already observed symbols")]
    NotDecodable { index: usize, a: usize, b: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("family has no entry for (N={n}, K={k})")]
    MissingFamilyEntry { n: usize, k: usize },

    #[error("target is not bracketed: value {lo_val:.4e} at {lo} and {hi_val:.4e} at {hi}, target {target:.4e}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        lo_val: f64,
        hi_val: f64,
        target: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadPair { .. } => "bad_pair",
            Error::InvalidCode(_) => "invalid_code",
            Error::NotDecodable { .. } => "not_decodable",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::MissingFamilyEntry { .. } => "missing_family_entry",
            Error::NotBracketed { .. } => "not_bracketed",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
