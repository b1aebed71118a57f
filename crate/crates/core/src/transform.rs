//! The kernel transform from quadrature statistics to the Husimi
//! distribution, deterministically and by Monte Carlo, plus the identity
//! checks that pin it down.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::kernel_closed_y;
use crate::numeric::{pairwise_sum, GaussHermiteDd, GaussLegendre};
use crate::quadrature::{QuadratureSample, RotatedDensity};
use crate::states::{hermite_functions, wigner, DensityMatrix, PhasePoint};

/// Half-width beyond which every admissible state's quadrature density has
/// negligible mass (the classical turning point plus a Gaussian tail).
fn decay_limit(dim: usize) -> f64 {
    (2.0 * dim as f64).sqrt() + 6.0
}

/// Node counts and truncation limit for the deterministic double integral:
/// trapezoid in the periodic phase, Gauss–Legendre in the quadrature value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    theta_nodes: usize,
    x_nodes: usize,
    x_limit: f64,
}

impl QuadratureScheme {
    pub const MIN_THETA_NODES: usize = 16;
    pub const MIN_X_NODES: usize = 32;
    pub const MIN_X_LIMIT: f64 = 6.0;

    pub fn new(theta_nodes: usize, x_nodes: usize, x_limit: f64) -> Result<Self> {
        if theta_nodes < Self::MIN_THETA_NODES {
            return Err(Error::InvalidScheme(format!(
                "theta_nodes = {theta_nodes} below minimum {}",
                Self::MIN_THETA_NODES
            )));
        }
        if x_nodes < Self::MIN_X_NODES {
            return Err(Error::InvalidScheme(format!(
                "x_nodes = {x_nodes} below minimum {}",
                Self::MIN_X_NODES
            )));
        }
        if !x_limit.is_finite() || x_limit < Self::MIN_X_LIMIT {
            return Err(Error::InvalidScheme(format!(
                "x_limit = {x_limit} below minimum {}",
                Self::MIN_X_LIMIT
            )));
        }
        Ok(QuadratureScheme {
            theta_nodes,
            x_nodes,
            x_limit,
        })
    }

    /// Default scheme for a Fock cutoff: 128 phase nodes, 160 quadrature
    /// nodes, limit `sqrt(2 dim) + 6`. Over-resolved for every state whose
    /// truncation guard passes.
    pub fn default_for_dim(dim: usize) -> Self {
        QuadratureScheme {
            theta_nodes: 128,
            x_nodes: 160,
            x_limit: decay_limit(dim),
        }
    }

    pub fn theta_nodes(&self) -> usize {
        self.theta_nodes
    }

    pub fn x_nodes(&self) -> usize {
        self.x_nodes
    }

    pub fn x_limit(&self) -> f64 {
        self.x_limit
    }
}

/// Values of a real function on a rectangular (q, p) grid, row-major with q
/// as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
        nq: usize,
        np: usize,
    ) -> Result<Self> {
        let bounds_ok = q_min.is_finite()
            && q_max.is_finite()
            && p_min.is_finite()
            && p_max.is_finite()
            && q_min < q_max
            && p_min < p_max;
        if !bounds_ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate grid bounds [{q_min}, {q_max}] x [{p_min}, {p_max}]"
            )));
        }
        if nq == 0 || np == 0 {
            return Err(Error::InvalidArgument("grid needs positive node counts".into()));
        }
        Ok(ScalarField {
            q_min,
            q_max,
            p_min,
            p_max,
            nq,
            np,
            values: vec![0.0; nq * np],
        })
    }

    pub fn q_at(&self, iq: usize) -> f64 {
        if self.nq == 1 {
            return self.q_min;
        }
        self.q_min + (self.q_max - self.q_min) * iq as f64 / (self.nq - 1) as f64
    }

    pub fn p_at(&self, ip: usize) -> f64 {
        if self.np == 1 {
            return self.p_min;
        }
        self.p_min + (self.p_max - self.p_min) * ip as f64 / (self.np - 1) as f64
    }

    /// Grid points in storage order (q outer, p inner).
    pub fn points(&self) -> Vec<PhasePoint> {
        let mut pts = Vec::with_capacity(self.nq * self.np);
        for iq in 0..self.nq {
            for ip in 0..self.np {
                pts.push(PhasePoint::new(self.q_at(iq), self.p_at(ip)));
            }
        }
        pts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn set_values(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.nq * self.np {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                self.nq * self.np,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("field contains non-finite values".into()));
        }
        self.values = values;
        Ok(())
    }

    pub fn get(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.np + ip]
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Quadrature densities of one state tabulated on a scheme's nodes. The
/// table does not depend on the phase-space point, so one table serves a
/// whole grid of kernel transforms.
#[derive(Debug, Clone)]
pub struct DensityTable {
    thetas: Vec<f64>,
    xs: Vec<f64>,
    weights: Vec<f64>,
    /// theta-major: values[i * xs.len() + j] = ρ^{Q_θi}(x_j)
    values: Vec<f64>,
}

impl DensityTable {
    pub fn new(rho: &DensityMatrix, scheme: &QuadratureScheme) -> Result<Self> {
        let t = scheme.theta_nodes();
        let thetas: Vec<f64> = (0..t).map(|i| 2.0 * PI * i as f64 / t as f64).collect();
        let rule = GaussLegendre::new(scheme.x_nodes());
        let (xs, weights) = rule.scaled(-scheme.x_limit(), scheme.x_limit());
        let dim = rho.dim();
        let rows: Vec<Vec<f64>> = thetas
            .par_iter()
            .map(|&theta| {
                let rot = RotatedDensity::new(rho, theta);
                let mut h = vec![0.0; dim];
                xs.iter()
                    .map(|&x| {
                        hermite_functions(x, &mut h);
                        rot.eval_with(&h)
                    })
                    .collect()
            })
            .collect();
        // each row must carry the whole distribution, or the limit is too
        // tight for this state
        for (i, row) in rows.iter().enumerate() {
            let mass: f64 = row.iter().zip(&weights).map(|(v, w)| v * w).sum();
            if (mass - 1.0).abs() > 1e-6 {
                return Err(Error::MassDeficit {
                    mass,
                    tol: 1e-6,
                });
            }
            let _ = i;
        }
        let mut values = Vec::with_capacity(t * xs.len());
        for row in rows {
            values.extend(row);
        }
        Ok(DensityTable {
            thetas,
            xs,
            weights,
            values,
        })
    }

    /// Husimi value `(1/2π) · E[M^{q,p}]` on the table's nodes, where the
    /// expectation runs over the normalized homodyne law `ρ^{Q_θ}(x) dx dθ/2π`.
    pub fn kernel_transform(&self, pt: PhasePoint) -> f64 {
        let nx = self.xs.len();
        let mut theta_terms = Vec::with_capacity(self.thetas.len());
        for (i, &theta) in self.thetas.iter().enumerate() {
            let shift = pt.q * theta.cos() + pt.p * theta.sin();
            let row = &self.values[i * nx..(i + 1) * nx];
            let mut inner = 0.0;
            for ((&w, &x), &density) in self.weights.iter().zip(&self.xs).zip(row) {
                inner += w * kernel_closed_y(x - shift) * density;
            }
            theta_terms.push(inner);
        }
        pairwise_sum(&theta_terms) / (self.thetas.len() as f64 * 2.0 * PI)
    }
}

/// Husimi value at one phase-space point through the kernel transform.
pub fn husimi_from_kernel(
    rho: &DensityMatrix,
    pt: PhasePoint,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    Ok(DensityTable::new(rho, scheme)?.kernel_transform(pt))
}

/// Kernel transform over many points, sharing one density table. Points are
/// processed in parallel; per-point sums are fixed-order, so the output is
/// identical for any thread count.
pub fn husimi_from_kernel_many(
    rho: &DensityMatrix,
    pts: &[PhasePoint],
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    let table = DensityTable::new(rho, scheme)?;
    Ok(pts
        .par_iter()
        .map(|&pt| table.kernel_transform(pt))
        .collect())
}

/// Kernel transform evaluated on a whole grid.
pub fn husimi_field_from_kernel(
    rho: &DensityMatrix,
    mut field: ScalarField,
    scheme: &QuadratureScheme,
) -> Result<ScalarField> {
    let values = husimi_from_kernel_many(rho, &field.points(), scheme)?;
    field.set_values(values)?;
    Ok(field)
}

/// Sample-mean estimate of the Husimi value from joint samples: the kernel
/// averaged under the homodyne law, divided by 2π, is the Husimi density.
pub fn husimi_mc_estimate(samples: &[QuadratureSample], pt: PhasePoint) -> MCEstimate {
    let n = samples.len();
    assert!(n >= 2, "need at least two samples");
    let vals: Vec<f64> = samples
        .iter()
        .map(|s| {
            kernel_closed_y(s.x - pt.q * s.theta.cos() - pt.p * s.theta.sin()) / (2.0 * PI)
        })
        .collect();
    let mean = pairwise_sum(&vals) / n as f64;
    let sq: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    MCEstimate {
        mean,
        stderr: (var / n as f64).sqrt(),
        n,
    }
}

/// Residual of the coherent-state identity
/// `e^{-|w-z|^2} = (1/sqrt(π)) ∮∫ M^{q,p}(θ, x) e^{-(x-ũ)^2} dθ dx / 2π`
/// with `(q, p)` the phase-space point of `z` and `ũ = sqrt(2) Re(w e^{-iθ})`.
pub fn coherent_identity_check(z: Complex64, w: Complex64, scheme: &QuadratureScheme) -> f64 {
    let lhs = (-(w - z).norm_sqr()).exp();
    let rule = GaussLegendre::new(scheme.x_nodes());
    let (xs, ws) = rule.scaled(-scheme.x_limit(), scheme.x_limit());
    let t = scheme.theta_nodes();
    let mut theta_terms = Vec::with_capacity(t);
    for i in 0..t {
        let theta = 2.0 * PI * i as f64 / t as f64;
        let rot = Complex64::from_polar(1.0, -theta);
        let shift = std::f64::consts::SQRT_2 * (z * rot).re;
        let center = std::f64::consts::SQRT_2 * (w * rot).re;
        let mut inner = 0.0;
        for (x, wt) in xs.iter().zip(&ws) {
            inner += wt * kernel_closed_y(x - shift) * (-(x - center) * (x - center)).exp();
        }
        theta_terms.push(inner);
    }
    let rhs = pairwise_sum(&theta_terms) / (t as f64 * PI.sqrt());
    (lhs - rhs).abs()
}

/// Error of the Gaussian–Hermite moment `∫ H_{2k}(x) e^{-(x-y)^2} dx`
/// against `sqrt(π) 2^{2k} y^{2k}`, by Gauss–Hermite quadrature centered at
/// `y`. Relative where the exact value is nonzero, absolute at `y = 0` with
/// `k >= 1` where it vanishes.
///
/// The moment cancels through up to twelve orders of magnitude of the
/// quadrature terms at `k = 10`, so nodes, weights and the reduction are
/// carried in double-double arithmetic; f64 would leave ~1e-4 of noise
/// where the check must resolve 1e-9.
pub fn hermite_gaussian_moment_check(k: usize, y: f64) -> f64 {
    use crate::numeric::dd::{Dd, SQRT_PI};
    let rule = GaussHermiteDd::new(28);
    let numeric =
        rule.integrate_dd(|t| crate::numeric::hermite_poly_dd(2 * k, t + Dd::from_f64(y)));
    let exact = SQRT_PI.mul_f64(4f64.powi(k as i32)) * Dd::from_f64(y).powi(2 * k);
    if exact.to_f64() == 0.0 {
        numeric.to_f64().abs()
    } else {
        ((numeric - exact) / exact).to_f64().abs()
    }
}

/// Absolute difference between the line integral of the Wigner function
/// along `{q cosθ + p sinθ = x}` and the rotated quadrature density at
/// `(θ, x)`.
pub fn radon_wigner_check(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    let limit = decay_limit(rho.dim());
    let rule = GaussLegendre::new(240);
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let line_integral = rule.integrate(-limit, limit, |t| {
        wigner(
            rho,
            PhasePoint::new(x * cos_t - t * sin_t, x * sin_t + t * cos_t),
        )
    });
    let density = crate::quadrature::quad_density(rho, theta, x);
    (line_integral - density).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{EhtSampler, SamplerSpec};
    use crate::states::husimi_direct;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scheme_validation() {
        assert!(QuadratureScheme::new(16, 32, 6.0).is_ok());
        assert!(QuadratureScheme::new(8, 32, 6.0).is_err());
        assert!(QuadratureScheme::new(16, 16, 6.0).is_err());
        assert!(QuadratureScheme::new(16, 32, 3.0).is_err());
        assert!(QuadratureScheme::new(16, 32, f64::NAN).is_err());
        let d = QuadratureScheme::default_for_dim(64);
        assert_eq!(d.theta_nodes(), 128);
        assert_eq!(d.x_nodes(), 160);
        assert_abs_diff_eq!(d.x_limit(), 128f64.sqrt() + 6.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_transform_at_origin() {
        let vac = DensityMatrix::vacuum(32).unwrap();
        let scheme = QuadratureScheme::new(128, 160, 10.0).unwrap();
        let v = husimi_from_kernel(&vac, PhasePoint::new(0.0, 0.0), &scheme).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (2.0 * PI), epsilon = 1e-8);
    }

    #[test]
    fn coherent_transform_matches_direct() {
        let dim = 48;
        let rho =
            DensityMatrix::coherent_state(Complex64::new(1.0, 0.5), dim).unwrap();
        let scheme = QuadratureScheme::default_for_dim(dim);
        let table = DensityTable::new(&rho, &scheme).unwrap();
        for (q, p) in [(0.0, 0.0), (1.5, 0.5), (-2.0, 1.0), (3.0, -3.0)] {
            let pt = PhasePoint::new(q, p);
            let direct = husimi_direct(&rho, pt).unwrap();
            let via_kernel = table.kernel_transform(pt);
            assert_abs_diff_eq!(via_kernel, direct, epsilon = 1e-6);
        }
    }

    #[test]
    fn number_state_transform_matches_direct() {
        let dim = 32;
        let rho = DensityMatrix::number_state(2, dim).unwrap();
        let scheme = QuadratureScheme::default_for_dim(dim);
        let pt = PhasePoint::new(1.0, -0.5);
        let direct = husimi_direct(&rho, pt).unwrap();
        let via_kernel = husimi_from_kernel(&rho, pt, &scheme).unwrap();
        assert_abs_diff_eq!(via_kernel, direct, epsilon = 1e-6);
    }

    #[test]
    fn theta_resolution_already_converged() {
        let dim = 32;
        let states = [
            DensityMatrix::vacuum(dim).unwrap(),
            DensityMatrix::number_state(1, dim).unwrap(),
            DensityMatrix::coherent_state(Complex64::new(1.0, 0.5), dim).unwrap(),
            DensityMatrix::pure_superposition(
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::default(),
                    Complex64::new(1.0, 0.0),
                ],
                dim,
            )
            .unwrap(),
        ];
        let coarse = QuadratureScheme::new(64, 160, decay_limit(dim)).unwrap();
        let fine = QuadratureScheme::new(128, 160, decay_limit(dim)).unwrap();
        let pt = PhasePoint::new(0.8, -1.1);
        for rho in &states {
            let a = husimi_from_kernel(rho, pt, &coarse).unwrap();
            let b = husimi_from_kernel(rho, pt, &fine).unwrap();
            assert!((a - b).abs() < 1e-9, "θ drift {}", (a - b).abs());
        }
    }

    #[test]
    fn tight_x_limit_is_detected_as_mass_deficit() {
        // a high Fock state reaches past x = 6, so this scheme cannot hold it
        let rho = DensityMatrix::number_state(35, 64).unwrap();
        let scheme = QuadratureScheme::new(16, 64, 6.0).unwrap();
        let res = husimi_from_kernel(&rho, PhasePoint::new(0.0, 0.0), &scheme);
        assert!(matches!(res, Err(Error::MassDeficit { .. })));
    }

    #[test]
    fn field_transform_fills_grid_in_storage_order() {
        let dim = 16;
        let rho = DensityMatrix::vacuum(dim).unwrap();
        let scheme = QuadratureScheme::default_for_dim(dim);
        let field = ScalarField::new(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let field = husimi_field_from_kernel(&rho, field, &scheme).unwrap();
        assert_abs_diff_eq!(field.get(1, 1), 1.0 / (2.0 * PI), epsilon = 1e-10);
        let direct = husimi_direct(&rho, PhasePoint::new(-1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(field.get(0, 2), direct, epsilon = 1e-10);
    }

    #[test]
    fn transform_linear_in_the_state() {
        let dim = 24;
        let a = DensityMatrix::number_state(0, dim).unwrap();
        let b = DensityMatrix::number_state(2, dim).unwrap();
        let mix = DensityMatrix::mixture(&[(0.3, a.clone()), (0.7, b.clone())]).unwrap();
        let scheme = QuadratureScheme::default_for_dim(dim);
        let pts: Vec<PhasePoint> = vec![
            PhasePoint::new(0.0, 0.0),
            PhasePoint::new(1.0, 1.0),
            PhasePoint::new(-0.6, 0.4),
        ];
        let va = husimi_from_kernel_many(&a, &pts, &scheme).unwrap();
        let vb = husimi_from_kernel_many(&b, &pts, &scheme).unwrap();
        let vm = husimi_from_kernel_many(&mix, &pts, &scheme).unwrap();
        for i in 0..pts.len() {
            assert_abs_diff_eq!(vm[i], 0.3 * va[i] + 0.7 * vb[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn mc_estimate_degenerate_samples() {
        let s = QuadratureSample { theta: 0.3, x: 1.1 };
        let pt = PhasePoint::new(0.2, -0.4);
        let est = husimi_mc_estimate(&[s, s], pt);
        assert_eq!(est.stderr, 0.0);
        let y = s.x - pt.q * s.theta.cos() - pt.p * s.theta.sin();
        assert_abs_diff_eq!(est.mean, kernel_closed_y(y) / (2.0 * PI), epsilon = 1e-15);
        assert_eq!(est.n, 2);
    }

    #[test]
    fn mc_estimate_vacuum() {
        let vac = DensityMatrix::vacuum(16).unwrap();
        let sampler = EhtSampler::new(&vac, SamplerSpec::default()).unwrap();
        let samples = sampler.sample(200_000, 5);
        let pt = PhasePoint::new(0.0, 0.0);
        let est = husimi_mc_estimate(&samples, pt);
        assert!(est.stderr <= 2.0 / (est.n as f64).sqrt());
        let truth = 1.0 / (2.0 * PI);
        assert!(
            (est.mean - truth).abs() <= 5.0 * est.stderr,
            "mean {} vs {truth} (stderr {})",
            est.mean,
            est.stderr
        );
    }

    #[test]
    fn mc_estimate_coherent_peak() {
        let rho = DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), 32).unwrap();
        let sampler = EhtSampler::new(&rho, SamplerSpec::default()).unwrap();
        let samples = sampler.sample(200_000, 6);
        // Husimi peak of |z=1⟩ sits at (sqrt2, 0) where the value is 1/2π
        let pt = PhasePoint::new(std::f64::consts::SQRT_2, 0.0);
        let est = husimi_mc_estimate(&samples, pt);
        let truth = 1.0 / (2.0 * PI);
        assert!((est.mean - truth).abs() <= 5.0 * est.stderr);
    }

    #[test]
    fn coherent_identity_reference_pairs() {
        let scheme = QuadratureScheme::default_for_dim(64);
        let zero = Complex64::default();
        assert!(coherent_identity_check(zero, zero, &scheme) <= 1e-8);
        let w = Complex64::new(2.0, 0.0);
        assert!(coherent_identity_check(zero, w, &scheme) <= 1e-8);
    }

    #[test]
    fn coherent_identity_random_pairs() {
        let scheme = QuadratureScheme::default_for_dim(64);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let z = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            let w = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
            let r = coherent_identity_check(z, w, &scheme);
            assert!(r <= 1e-6, "residual {r} at z = {z}, w = {w}");
        }
    }

    #[test]
    fn gaussian_moment_identity() {
        assert!(hermite_gaussian_moment_check(0, 0.7) <= 1e-12);
        assert!(hermite_gaussian_moment_check(3, 0.0) <= 1e-9);
        assert!(hermite_gaussian_moment_check(5, 1.5) <= 1e-8);
    }

    #[test]
    fn gaussian_moment_survives_deep_cancellation() {
        // k = 10 at y = 0.5 cancels ~1e12 of term magnitude down to sqrt(π)
        assert!(hermite_gaussian_moment_check(10, 0.5) <= 1e-10);
        assert!(hermite_gaussian_moment_check(10, 0.0) <= 1e-12);
        assert!(hermite_gaussian_moment_check(12, 0.0) <= 1e-12);
    }

    #[test]
    fn radon_check_reference_points() {
        let vac = DensityMatrix::vacuum(24).unwrap();
        assert!(radon_wigner_check(&vac, 0.0, 0.0) <= 1e-8);
        let one = DensityMatrix::number_state(1, 24).unwrap();
        assert!(radon_wigner_check(&one, 0.7, 1.0) <= 1e-6);
        let coh = DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), 32).unwrap();
        for x in [-4.0, -1.3, 0.0, 2.2, 4.0] {
            assert!(radon_wigner_check(&coh, PI / 3.0, x) <= 1e-6);
        }
    }

    #[test]
    fn scalar_field_layout() {
        let mut f = ScalarField::new(-1.0, 1.0, 0.0, 2.0, 3, 2).unwrap();
        assert_eq!(f.q_at(0), -1.0);
        assert_eq!(f.q_at(2), 1.0);
        assert_eq!(f.p_at(1), 2.0);
        let pts = f.points();
        assert_eq!(pts.len(), 6);
        // q outer: first two points share q_min
        assert_eq!(pts[0].q, -1.0);
        assert_eq!(pts[1].q, -1.0);
        assert_eq!(pts[1].p, 2.0);
        f.set_values((0..6).map(|i| i as f64).collect()).unwrap();
        assert_eq!(f.get(2, 1), 5.0);
        assert!(f.set_values(vec![0.0; 5]).is_err());
        assert!(ScalarField::new(1.0, -1.0, 0.0, 1.0, 2, 2).is_err());
    }

    #[test]
    fn stderr_respects_kernel_bound() {
        let vac = DensityMatrix::vacuum(8).unwrap();
        let sampler = EhtSampler::new(
            &vac,
            SamplerSpec {
                phase_bins: 36,
                x_nodes: 1001,
            },
        )
        .unwrap();
        for n in [100, 1000] {
            let samples = sampler.sample(n, 2);
            let est = husimi_mc_estimate(&samples, PhasePoint::new(0.5, 0.5));
            assert!(est.stderr <= 2.0 / (n as f64).sqrt());
        }
    }
}
