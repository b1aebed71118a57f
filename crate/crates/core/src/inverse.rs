//! Divergence of the would-be inverse kernel.
//!
//! Inverting the quadrature-to-Husimi transform would require a kernel
//! whose defining double Fourier integral contains an `e^{+p̃²/2}` factor.
//! This module evaluates that integral on growing truncation squares
//! `[-R, R]²` and exhibits its `e^{R²/2}` blow-up. A finite scan
//! demonstrates the divergence; it is evidence, not a proof of
//! non-existence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::GaussLegendre;

/// Largest admitted truncation radius. The divergence is unambiguous well
/// before this point, and beyond it the oscillation-resolving node counts
/// become the binding cost.
pub const MAX_RADIUS: f64 = 8.0;

/// Magnitudes of the truncated inverse-kernel integral over growing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceScan {
    radii: Vec<f64>,
    magnitudes: Vec<f64>,
}

impl DivergenceScan {
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `ln(magnitude) - R²/2` per scan entry: flat residuals confirm the
    /// `e^{R²/2}` growth rate.
    pub fn growth_residuals(&self) -> Vec<f64> {
        self.radii
            .iter()
            .zip(&self.magnitudes)
            .map(|(r, m)| m.ln() - 0.5 * r * r)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Truncated inverse-kernel integral
/// `(1/(4π²√π)) ∬_{[-R,R]²} exp(-q̃²/2 + p̃²/2 + i q̃ α + i p̃ β - x²) dq̃ dp̃`
/// with `α = -u sinθ + v cosθ` and `β = 2x - u cosθ - v sinθ`.
///
/// The square truncation makes the integral an exact product of two 1-D
/// integrals, each evaluated by Gauss–Legendre with the node count scaled
/// to the oscillation frequency.
pub fn partial_inverse_integral(
    theta: f64,
    x: f64,
    u: f64,
    v: f64,
    radius: f64,
) -> Result<Complex64> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "truncation radius must be positive and finite, got {radius}"
        )));
    }
    if radius > MAX_RADIUS {
        return Err(Error::InvalidArgument(format!(
            "truncation radius {radius} exceeds the supported maximum {MAX_RADIUS}"
        )));
    }
    let alpha = -u * theta.sin() + v * theta.cos();
    let beta = 2.0 * x - u * theta.cos() - v * theta.sin();
    let nodes = (32.0 + 8.0 * radius * (1.0 + alpha.abs() + beta.abs())).ceil() as usize;
    let rule = GaussLegendre::new(nodes);
    let i_q = oscillatory_gaussian(&rule, radius, -0.5, alpha);
    let i_p = oscillatory_gaussian(&rule, radius, 0.5, beta);
    let prefactor = (-x * x).exp() / (4.0 * std::f64::consts::PI.powi(2) * std::f64::consts::PI.sqrt());
    Ok(i_q * i_p * prefactor)
}

/// `∫_{-R}^{R} e^{c t² + i k t} dt`.
fn oscillatory_gaussian(rule: &GaussLegendre, radius: f64, c: f64, k: f64) -> Complex64 {
    let mut acc = Complex64::default();
    let hw = radius;
    for (t, w) in rule.nodes().iter().zip(rule.weights()) {
        let s = hw * t;
        acc += Complex64::from_polar((c * s * s).exp() * w, k * s);
    }
    acc * hw
}

/// Evaluates the truncated integral magnitude at each radius.
pub fn divergence_scan(theta: f64, x: f64, u: f64, v: f64, radii: &[f64]) -> Result<DivergenceScan> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("scan needs at least one radius".into()));
    }
    for pair in radii.windows(2) {
        if pair[1].is_nan() || pair[1] <= pair[0] {
            return Err(Error::InvalidArgument(format!(
                "radii must increase strictly: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let magnitudes = radii
        .iter()
        .map(|&r| partial_inverse_integral(theta, x, u, v, r).map(|c| c.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DivergenceScan {
        radii: radii.to_vec(),
        magnitudes,
    })
}
