//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input document could not be parsed; `path` points at the offending key.
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    /// Inputs carrying a derivation or a tail map are rejected up front.
    #[error("non-trimmed extensions are out of scope: key `{key}` present")]
    OutOfScope { key: String },

    #[error("`{name}` must be nonzero")]
    ZeroParameter { name: &'static str },

    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: &'static str },

    #[error("relation {index} is {reason}")]
    BadRelation { index: usize, reason: String },

    /// Two rule leads divide one another, so the oriented system is ill-formed.
    #[error("rule lead {a} divides rule lead {b}")]
    DividingLeads { a: usize, b: usize },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("subspace is not contained in the claimed enclosing space")]
    NotContained,

    #[error("size budget exceeded: computation needs {needed} coordinates, budget is {budget}")]
    SizeBudget { needed: usize, budget: usize },

    /// Homological routines refuse to run on a system whose critical overlaps
    /// do not all resolve.
    #[error("rewriting system is not certified confluent: {details}")]
    Uncertified { details: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A module map entry whose degree disagrees with source and target shifts.
    #[error("map entry ({row},{col}) is not homogeneous of degree {expected}")]
    InhomogeneousEntry {
        row: usize,
        col: usize,
        expected: i64,
    },

    #[error("ideal generator {index} is not homogeneous of degree 1")]
    BadIdealGenerator { index: usize },

    #[error("{0}")]
    Invalid(String),
}
