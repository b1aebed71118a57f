//! Numerics for continuous-variable homodyne tomography.
//!
//! The library evaluates rotated quadrature distributions of a quantum state
//! in a truncated Fock basis, transforms them into the Husimi phase-space
//! distribution through a generalized Markov kernel built from the Dawson
//! integral, and cross-validates the transform against direct Husimi and
//! Wigner/Radon evaluation. A deterministic quadrature pathway and a seeded
//! Monte Carlo pathway are provided, together with a numerical demonstration
//! that the transform admits no inverse kernel of the same kind.
//!
//! Modules:
//! - [`states`]: density matrices, Hermite functions, direct Husimi and
//!   Wigner evaluation.
//! - [`quadrature`]: rotated quadrature densities and seeded sampling of the
//!   joint homodyne distribution.
//! - [`kernel`]: the Dawson integral and the kernel in closed form and as a
//!   Hermite series.
//! - [`transform`]: the kernel transform (deterministic and Monte Carlo) and
//!   the identity checks backing it.
//! - [`inverse`]: divergence scan of the would-be inverse kernel integral.

pub mod error;
pub mod inverse;
pub mod kernel;
pub mod numeric;
pub mod quadrature;
pub mod states;
pub mod transform;

pub use error::{Error, Result};
pub use states::{DensityMatrix, PhasePoint};
