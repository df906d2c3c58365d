//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by grid construction, operator application and synthesis.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid parameters outside their allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A wave vector sits at the origin or on the polar axis, where the
    /// spherical frame (and the cot θ / k factors built from it) is singular.
    /// `points` lists up to the first few offending grid indices.
    #[error("singular spherical frame at {count} grid point(s); first offenders (ix,iy,iz): {points:?}")]
    PoleError {
        count: usize,
        points: Vec<(usize, usize, usize)>,
    },

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A field was supplied in the wrong domain (k-space vs r-space).
    #[error("domain mismatch: expected {expected}, got {got}")]
    DomainMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// α labels of a field pair do not form the required (α, −α) pairing.
    #[error("alpha label mismatch: {0}")]
    AlphaMismatch(String),

    /// Physical-constants set violates c²ε₀μ₀ = 1.
    #[error("inconsistent constants: c^2*eps0*mu0 = {0}, must equal 1 within 1e-12")]
    InconsistentConstants(f64),

    /// A test field handed to a transversality-requiring check has
    /// longitudinal content above tolerance.
    #[error("field is not transverse: relative longitudinal content {0:.3e}")]
    NonTransverse(f64),

    /// Two-photon product grid would exceed the configured memory guard.
    #[error("product grid too large: {requested} values exceed limit {limit}")]
    ProductGridTooLarge { requested: usize, limit: usize },

    /// Radial envelope has not decayed at the grid edge.
    #[error("radial envelope not decayed at grid edge: |u(edge)|/max|u| = {0:.3e}")]
    EnvelopeNotDecayed(f64),

    /// Beam parameters incompatible (e.g. k_z > ω/c).
    #[error("invalid beam: {0}")]
    InvalidBeam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
