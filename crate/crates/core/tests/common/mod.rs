//! Shared fixtures for the integration suites.

use num_complex::Complex64;
use tomoq_core::numeric::GaussLegendre;
use tomoq_core::DensityMatrix;

/// The six canonical test states, at the given Fock cutoff.
pub fn canonical_states(dim: usize) -> Vec<(&'static str, DensityMatrix)> {
    vec![
        ("vacuum", DensityMatrix::vacuum(dim).unwrap()),
        ("fock-1", DensityMatrix::number_state(1, dim).unwrap()),
        ("fock-2", DensityMatrix::number_state(2, dim).unwrap()),
        (
            "coherent-1+0.5i",
            DensityMatrix::coherent_state(Complex64::new(1.0, 0.5), dim).unwrap(),
        ),
        ("thermal-0.5", DensityMatrix::thermal_state(0.5, dim).unwrap()),
        (
            "cat-0-2",
            DensityMatrix::pure_superposition(
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::default(),
                    Complex64::new(1.0, 0.0),
                ],
                dim,
            )
            .unwrap(),
        ),
    ]
}

/// Defining-integral oracle for the Dawson function: panelled high-order
/// Gauss–Legendre on `e^{t^2}`, then the Gaussian damping factor. Accurate
/// beyond 1e-14 for |x| <= 10.
pub fn dawson_quadrature_oracle(x: f64) -> f64 {
    let ax = x.abs();
    if ax == 0.0 {
        return 0.0;
    }
    let rule = GaussLegendre::new(24);
    let panels = (ax / 0.5).ceil() as usize;
    let mut integral = 0.0;
    for i in 0..panels {
        let a = ax * i as f64 / panels as f64;
        let b = ax * (i + 1) as f64 / panels as f64;
        integral += rule.integrate(a, b, |t| (t * t).exp());
    }
    let val = (-ax * ax).exp() * integral;
    if x < 0.0 {
        -val
    } else {
        val
    }
}
