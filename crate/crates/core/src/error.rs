//! Error type shared by all modules of the crate.
//!
//! Display strings start with the error name so that front ends can report
//! failures verbatim.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("DuplicateFlux: fluxes {first} and {second} are closer than the minimum separation")]
    DuplicateFlux { first: usize, second: usize },

    #[error("NonFinite: {what} must be finite")]
    NonFinite { what: &'static str },

    #[error("TooCloseToFlux: evaluation point within {limit:e} of a flux position")]
    TooCloseToFlux { limit: f64 },

    #[error("IndexOutOfRange: flux index {index} out of range for {len} fluxes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("InvalidPath: {reason}")]
    InvalidPath { reason: String },

    #[error("PathThroughFlux: path passes within {limit:e} of a flux or unwrapping center")]
    PathThroughFlux { limit: f64 },

    #[error("PathNotClosed: operation requires a closed path")]
    PathNotClosed,

    #[error("ToleranceNotReached: quadrature did not reach tolerance {tol:e} within the subdivision limit")]
    ToleranceNotReached { tol: f64 },

    #[error("OutOfSupportedRange: {what}")]
    OutOfSupportedRange { what: String },

    #[error("TruncationInsufficient: {detail}")]
    TruncationInsufficient { detail: String },

    #[error("ForwardRegion: sample angle {phi} is within {half_angle} rad of the forward direction")]
    ForwardRegion { phi: f64, half_angle: f64 },

    #[error("RadiusTooSmall: k*r = {kr} is below the far-field threshold {min}")]
    RadiusTooSmall { kr: f64, min: f64 },

    #[error("QuadratureFailure: adaptive quadrature did not converge")]
    QuadratureFailure,

    #[error("TailNotConverged: semi-infinite leg truncation bound exceeds the budget")]
    TailNotConverged,

    #[error("NotCoprime: {p} and {q} share a common factor")]
    NotCoprime { p: i64, q: i64 },

    #[error("InvalidModulus: modulus q = {q} must be at least 2")]
    InvalidModulus { q: i64 },

    #[error("NonIntegerAlpha: flux strength {alpha} must not be an integer here")]
    NonIntegerAlpha { alpha: f64 },

    #[error("InvalidGeometry: {reason}")]
    InvalidGeometry { reason: String },
}
