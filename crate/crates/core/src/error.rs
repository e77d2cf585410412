use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("velocity tuple is empty")]
    EmptyTuple,

    #[error("velocity at position {0} is zero")]
    ZeroVelocity(usize),

    #[error("frequency at position {0} is zero")]
    ZeroFrequency(usize),

    #[error("radius {0} is outside the open interval (0, 1/2)")]
    RadiusOutOfRange(Rational),

    #[error("{frequencies} frequencies but {radii} radii")]
    RankMismatch { frequencies: usize, radii: usize },

    #[error("progression must have rank at least one")]
    EmptyProgression,

    #[error("dimension {0} is negative")]
    NegativeDimension(Rational),

    #[error("scale factor {0} must be positive")]
    NonPositiveScale(Rational),

    #[error("bound {bound} is smaller than the runner count {n}")]
    BoundTooSmall { n: usize, bound: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("checkpoint does not match the requested search: {0}")]
    CheckpointMismatch(String),

    #[error("i/o failure on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed record: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
