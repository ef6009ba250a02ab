//! Error taxonomy shared by the library and the command-line tool.
//!
//! Variants are grouped by how a caller should react: malformed input,
//! a structural refusal (the model exists but the requested law does not),
//! or an internal identity failing to hold (always a bug).

use thiserror::Error;

/// Everything that can go wrong while building models or running checks.
#[derive(Debug, Error)]
pub enum Error {
    /// The seed document could not be parsed at all.
    #[error("seed document is not valid JSON: {0}")]
    SeedSyntax(String),

    /// The seed document parsed but violates a structural rule.
    #[error("invalid seed: {0}")]
    SeedInvalid(String),

    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The network is degenerate in a way that removes the requested law.
    /// The canonical case is a two-vertex seed with arity one, whose urn
    /// has balance zero and a singular replacement matrix.
    #[error("structural refusal: {0}")]
    Structural(String),

    /// An exact identity that must hold by construction failed.
    #[error("internal identity violated: {0}")]
    Internal(String),

    /// Reading or writing a file failed.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
