use thiserror::Error;

/// Errors produced by state construction, sampling and the transform paths.
#[derive(Debug, Error)]
pub enum Error {
    /// The Fock cutoff is too small for the requested amplitude; the state
    /// would lose more tail mass than the accuracy budget allows.
    #[error("truncation inadequate: |z|^2 = {z_sq} exceeds dim/4 = {limit} (raise dim)")]
    TruncationInadequate { z_sq: f64, limit: f64 },

    /// A constructed matrix failed a density-matrix invariant.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// An argument fell outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A quadrature scheme violated its structural bounds.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    /// Tabulated probability mass did not account for the whole distribution,
    /// which signals an inadequate truncation or grid.
    #[error("mass deficit: integrated mass {mass} differs from 1 beyond {tol:e}")]
    MassDeficit { mass: f64, tol: f64 },

    /// A numeric self-check failed (non-real expectation, residual over
    /// threshold).
    #[error("numeric check failed: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
