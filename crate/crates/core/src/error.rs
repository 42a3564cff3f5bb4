//! Error type shared by all solver and geometry modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rho must be positive at interior node {index} (got {value})")]
    NonPositiveRho { index: usize, value: f64 },

    #[error("arc-speed gamma degenerate at node {index}: {value} < {floor}")]
    DegenerateGamma { index: usize, value: f64, floor: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("ratio a/rho unbounded near pole: |{0:e}| exceeds cap")]
    UnboundedRatio(f64),

    #[error("level alpha = {alpha} lies within the tolerance band of a critical value")]
    AlphaAtCriticalValue { alpha: f64 },

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    #[error("beta = {beta} out of admissible range (0, {limit})")]
    BetaOutOfRange { beta: f64, limit: f64 },

    #[error("solver did not converge after {sweeps} sweeps (last update {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },

    #[error("insufficient range: {0}")]
    InsufficientRange(String),

    #[error("coincident points in Green's-function evaluation")]
    CoincidentPoints,

    #[error("packing failure: cannot place {requested} points at separation {separation}")]
    PackingFailure { requested: usize, separation: f64 },

    #[error("invalid bounds: require 0 < c <= C, got c = {c}, C = {big_c}")]
    InvalidBounds { c: f64, big_c: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
