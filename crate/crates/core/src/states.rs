//! Quantum states in a truncated Fock basis: constructors, Hermite
//! functions, and direct Husimi / Wigner evaluation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum allowed Hermiticity defect of a raw matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues may dip this far below zero before the state is rejected.
pub const PSD_TOL: f64 = 1e-10;

/// Default Fock cutoff used by the command-line front end.
pub const DEFAULT_DIM: usize = 64;

/// A point (q, p) in phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }

    /// Complex amplitude `z = (q + ip)/sqrt(2)`.
    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.q, self.p) / std::f64::consts::SQRT_2
    }

    /// `(q, p)` of an amplitude, inverting [`PhasePoint::amplitude`].
    pub fn from_amplitude(z: Complex64) -> Self {
        PhasePoint {
            q: std::f64::consts::SQRT_2 * z.re,
            p: std::f64::consts::SQRT_2 * z.im,
        }
    }
}

/// Density matrix over Fock levels `0..dim`: Hermitian, unit trace,
/// positive semidefinite (each within its stated tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    elems: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates and wraps a raw matrix.
    ///
    /// Hermiticity is checked on the input, after which the matrix is
    /// symmetrized to `(ρ + ρ†)/2` so rounding never leaks into downstream
    /// arithmetic; trace and positivity are checked on the symmetrized form.
    pub fn new(elems: DMatrix<Complex64>) -> Result<Self> {
        let dim = elems.nrows();
        if dim == 0 || elems.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "expected a square nonempty matrix, got {}x{}",
                elems.nrows(),
                elems.ncols()
            )));
        }
        let mut defect = 0.0f64;
        for m in 0..dim {
            for n in m..dim {
                let d = (elems[(m, n)] - elems[(n, m)].conj()).norm();
                defect = defect.max(d);
            }
        }
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:e} exceeds {HERMITICITY_TOL:e}"
            )));
        }
        let sym = (&elems + elems.adjoint()) * Complex64::new(0.5, 0.0);
        let trace: Complex64 = (0..dim).map(|i| sym[(i, i)]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {trace} differs from 1 beyond {TRACE_TOL:e}"
            )));
        }
        let min_eig = sym
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min_eig:e} below -{PSD_TOL:e}"
            )));
        }
        Ok(DensityMatrix { dim, elems: sym })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elems(&self) -> &DMatrix<Complex64> {
        &self.elems
    }

    #[inline]
    pub fn elem(&self, m: usize, n: usize) -> Complex64 {
        self.elems[(m, n)]
    }

    /// Fock state `|n⟩⟨n|`.
    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidArgument(format!(
                "number state n = {n} requires dim > n, got dim = {dim}"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        DensityMatrix::new(m)
    }

    /// Vacuum `|0⟩⟨0|`.
    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number_state(0, dim)
    }

    /// Coherent state `|z⟩⟨z|`, truncated and renormalized.
    ///
    /// Rejected when `|z|^2 > dim/4`: past that point the dropped Poisson
    /// tail is no longer negligible at the library's accuracy targets.
    pub fn coherent_state(z: Complex64, dim: usize) -> Result<Self> {
        check_truncation(z.norm_sqr(), dim)?;
        let mut c = coherent_coefficients(z, dim);
        let norm = c.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut c {
            *a /= norm;
        }
        Self::pure_state_from_normalized(&c)
    }

    /// Thermal state with mean occupation `nbar`, renormalized over the
    /// truncated basis.
    pub fn thermal_state(nbar: f64, dim: usize) -> Result<Self> {
        if !nbar.is_finite() || nbar < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "thermal occupation must be a finite nonnegative real, got {nbar}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be positive".into()));
        }
        let ratio = nbar / (1.0 + nbar);
        let mut diag = Vec::with_capacity(dim);
        let mut w = 1.0;
        for _ in 0..dim {
            diag.push(w);
            w *= ratio;
        }
        let total: f64 = diag.iter().sum();
        let mut m = DMatrix::zeros(dim, dim);
        for (n, d) in diag.iter().enumerate() {
            m[(n, n)] = Complex64::new(d / total, 0.0);
        }
        DensityMatrix::new(m)
    }

    /// Pure superposition over Fock levels. Amplitudes are normalized
    /// internally; the list may be shorter than `dim`.
    pub fn pure_superposition(amplitudes: &[Complex64], dim: usize) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() > dim {
            return Err(Error::InvalidArgument(format!(
                "need 1..=dim amplitudes, got {} with dim = {dim}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument(
                "superposition amplitudes are all zero".into(),
            ));
        }
        let mut c = vec![Complex64::default(); dim];
        for (i, a) in amplitudes.iter().enumerate() {
            c[i] = a / norm;
        }
        Self::pure_state_from_normalized(&c)
    }

    /// Convex mixture of states of equal dimension.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("mixture needs components".into()));
        }
        let dim = components[0].1.dim;
        let mut total = 0.0;
        for (w, rho) in components {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "mixture weight {w} must be a finite nonnegative real"
                )));
            }
            if rho.dim != dim {
                return Err(Error::InvalidArgument(format!(
                    "mixture dimensions disagree: {} vs {dim}",
                    rho.dim
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, rho) in components {
            m += &rho.elems * Complex64::new(*w, 0.0);
        }
        DensityMatrix::new(m)
    }

    /// `tr(ρ^2)`.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for m in 0..self.dim {
            for n in 0..self.dim {
                acc += (self.elems[(m, n)] * self.elems[(n, m)]).re;
            }
        }
        acc
    }

    fn pure_state_from_normalized(c: &[Complex64]) -> Result<Self> {
        let dim = c.len();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = c[i] * c[j].conj();
            }
        }
        DensityMatrix::new(m)
    }
}

pub(crate) fn check_truncation(z_sq: f64, dim: usize) -> Result<()> {
    let limit = dim as f64 / 4.0;
    if z_sq > limit {
        return Err(Error::TruncationInadequate { z_sq, limit });
    }
    Ok(())
}

/// Truncated coherent coefficients `c_n = e^{-|z|^2/2} z^n / sqrt(n!)`,
/// before renormalization.
pub fn coherent_coefficients(z: Complex64, dim: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(dim);
    let mut a = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 0..dim {
        c.push(a);
        a *= z / ((n + 1) as f64).sqrt();
    }
    c
}

/// L²-normalized Hermite function `h_n(x)`, by the stable two-term
/// recurrence `h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    hermite_functions(x, &mut buf);
    buf[n]
}

/// Fills `out[n] = h_n(x)` for `n` up to `out.len() - 1`.
pub fn hermite_functions(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out[0] = h0;
    if out.len() == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * x * h0;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// Husimi distribution `(1/2π) ⟨z|ρ|z⟩` at a phase-space point, evaluated
/// through the truncated coherent coefficient vector.
///
/// Rejects points outside the truncation guard `|z|^2 <= dim/4`, where the
/// value would no longer approximate the untruncated state's Husimi
/// function at full accuracy.
pub fn husimi_direct(rho: &DensityMatrix, pt: PhasePoint) -> Result<f64> {
    let z = pt.amplitude();
    check_truncation(z.norm_sqr(), rho.dim())?;
    husimi_unchecked(rho, pt)
}

/// Husimi value of the truncated state itself, with no adequacy guard.
///
/// This is exact for `ρ` as stored (whole-plane integrals of it are
/// normalized), and coincides with [`husimi_direct`] wherever the guard
/// admits the point.
pub fn husimi_unchecked(rho: &DensityMatrix, pt: PhasePoint) -> Result<f64> {
    let c = coherent_coefficients(pt.amplitude(), rho.dim());
    let mut acc = Complex64::default();
    for (m, cm) in c.iter().enumerate() {
        let mut row = Complex64::default();
        for (n, cn) in c.iter().enumerate() {
            row += rho.elem(m, n) * cn;
        }
        acc += cm.conj() * row;
    }
    if acc.im.abs() > 1e-12 {
        return Err(Error::Numeric(format!(
            "Husimi expectation has imaginary residue {:e}",
            acc.im
        )));
    }
    Ok(acc.re / (2.0 * PI))
}

/// Wigner function `W_ρ(q, p)`, normalized so that it integrates to 1 over
/// the plane and its line integrals reproduce the rotated quadrature
/// densities.
///
/// Evaluated by the Fock-basis expansion in associated Laguerre polynomials,
/// one diagonal `m - n = k` at a time, with magnitudes kept in the bounded
/// combinations `z^k / sqrt(k!)` and `sqrt(n! k!/(n+k)!)`.
pub fn wigner(rho: &DensityMatrix, pt: PhasePoint) -> f64 {
    let dim = rho.dim();
    let s = 2.0 * (pt.q * pt.q + pt.p * pt.p);
    let zeta = Complex64::new(pt.q, pt.p) * std::f64::consts::SQRT_2;
    let mut total = 0.0;
    let mut zeta_scaled = Complex64::new(1.0, 0.0); // zeta^k / sqrt(k!)
    for k in 0..dim {
        // diagonal sum A_k = Σ_n ρ_{n,n+k} (-1)^n sqrt(n! k!/(n+k)!) L_n^{(k)}(s)
        let mut lag_prev = 0.0;
        let mut lag = 1.0; // L_0^{(k)}
        let mut binom_scale = 1.0; // sqrt(n! k!/(n+k)!), starts at n = 0
        let mut diag_sum = Complex64::default();
        let mut sign = 1.0;
        for n in 0..dim - k {
            diag_sum += rho.elem(n, n + k) * (sign * binom_scale * lag);
            // advance Laguerre: (n+1) L_{n+1} = (2n+1+k-s) L_n - (n+k) L_{n-1}
            let nf = n as f64;
            let kf = k as f64;
            let lag_next = ((2.0 * nf + 1.0 + kf - s) * lag - (nf + kf) * lag_prev) / (nf + 1.0);
            lag_prev = lag;
            lag = lag_next;
            binom_scale *= ((nf + 1.0) / (nf + 1.0 + kf)).sqrt();
            sign = -sign;
        }
        if k == 0 {
            total += diag_sum.re;
        } else {
            // the Hermitian partner diagonal contributes the conjugate, so
            // the pair sums to twice the real part
            total += 2.0 * (zeta_scaled * diag_sum).re;
        }
        zeta_scaled *= zeta / ((k + 1) as f64).sqrt();
    }
    total * (-(pt.q * pt.q + pt.p * pt.p)).exp() / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussLegendre;
    use approx::assert_abs_diff_eq;

    /// Exact-coefficient oracle for `h_n`, valid for n <= 20: integer
    /// Hermite coefficients divided by the normalization.
    fn hermite_function_oracle(n: usize, x: f64) -> f64 {
        let mut coeffs: Vec<Vec<i128>> = vec![vec![1], vec![0, 2]];
        for k in 1..n.max(1) {
            let prev = &coeffs[k];
            let prev2 = &coeffs[k - 1];
            let mut next = vec![0i128; k + 2];
            for (i, &c) in prev.iter().enumerate() {
                next[i + 1] += 2 * c;
            }
            for (i, &c) in prev2.iter().enumerate() {
                next[i] -= 2 * k as i128 * c;
            }
            coeffs.push(next);
        }
        let poly: f64 = coeffs[n]
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * x.powi(i as i32))
            .sum();
        let mut ln_norm = 0.0;
        for k in 1..=n {
            ln_norm += (k as f64).ln();
        }
        ln_norm = -0.5 * (n as f64 * 2f64.ln() + ln_norm + 0.5 * PI.ln());
        poly * (ln_norm - 0.5 * x * x).exp()
    }

    #[test]
    fn hermite_function_ground_state() {
        assert_abs_diff_eq!(
            hermite_function(0, 0.0),
            0.7511255444649425,
            epsilon = 1e-15
        );
        assert_eq!(hermite_function(1, 0.0), 0.0);
    }

    #[test]
    fn hermite_function_against_exact_coefficients() {
        assert_abs_diff_eq!(
            hermite_function(5, 1.3),
            hermite_function_oracle(5, 1.3),
            epsilon = 1e-13
        );
        for n in [2, 7, 12, 20] {
            for x in [-2.5, -0.4, 0.9, 3.3] {
                assert_abs_diff_eq!(
                    hermite_function(n, x),
                    hermite_function_oracle(n, x),
                    epsilon = 1e-11
                );
            }
        }
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let rule = GaussLegendre::new(220);
        let (xs, ws) = rule.scaled(-12.0, 12.0);
        let max_n = 20;
        let mut vals = vec![vec![0.0; max_n + 1]; xs.len()];
        for (i, &x) in xs.iter().enumerate() {
            hermite_functions(x, &mut vals[i]);
        }
        for m in 0..=max_n {
            for n in m..=max_n {
                let mut acc = 0.0;
                for i in 0..xs.len() {
                    acc += ws[i] * vals[i][m] * vals[i][n];
                }
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!(
                    (acc - expect).abs() <= 1e-10,
                    "⟨h_{m}, h_{n}⟩ = {acc}"
                );
            }
        }
    }

    #[test]
    fn number_state_layout() {
        let rho = DensityMatrix::number_state(2, 8).unwrap();
        for m in 0..8 {
            for n in 0..8 {
                let expect = if m == 2 && n == 2 { 1.0 } else { 0.0 };
                assert_eq!(rho.elem(m, n), Complex64::new(expect, 0.0));
            }
        }
        assert!(DensityMatrix::number_state(4, 4).is_err());
        let vac = DensityMatrix::vacuum(4).unwrap();
        assert_eq!(vac.elem(0, 0).re, 1.0);
    }

    #[test]
    fn coherent_state_coefficients_and_purity() {
        let z = Complex64::new(1.0, 0.0);
        let dim = 32;
        let rho = DensityMatrix::coherent_state(z, dim).unwrap();
        // magnitudes e^{-1/2}/sqrt(n!) before renormalization; the
        // renormalization factor differs from 1 by far less than 1e-12
        let raw = coherent_coefficients(z, dim);
        let norm: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12, "norm deficit {}", 1.0 - norm);
        let mut fact = 1.0;
        for (n, coeff) in raw.iter().enumerate().take(8) {
            if n > 0 {
                fact *= n as f64;
            }
            let expect = (-0.5f64).exp() / fact.sqrt();
            assert_abs_diff_eq!(coeff.re, expect, epsilon = 1e-13);
            assert_abs_diff_eq!(rho.elem(n, n).re, expect * expect, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn coherent_state_truncation_guard() {
        let err = DensityMatrix::coherent_state(Complex64::new(3.0, 0.0), 16);
        assert!(matches!(err, Err(Error::TruncationInadequate { .. })));
    }

    #[test]
    fn coherent_vacuum_is_the_number_vacuum() {
        let a = DensityMatrix::coherent_state(Complex64::default(), 8).unwrap();
        let b = DensityMatrix::number_state(0, 8).unwrap();
        for m in 0..8 {
            for n in 0..8 {
                assert!((a.elem(m, n) - b.elem(m, n)).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn thermal_state_ratios() {
        let rho = DensityMatrix::thermal_state(0.5, 32).unwrap();
        let ratio = rho.elem(0, 0).re / rho.elem(1, 1).re;
        assert_abs_diff_eq!(ratio, 3.0, epsilon = 1e-12);
        let trace: f64 = (0..32).map(|n| rho.elem(n, n).re).sum();
        assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-14);
        let vac = DensityMatrix::thermal_state(0.0, 8).unwrap();
        assert_eq!(vac.elem(0, 0).re, 1.0);
    }

    #[test]
    fn constructor_invariants_hold() {
        let states = [
            DensityMatrix::vacuum(16).unwrap(),
            DensityMatrix::number_state(3, 16).unwrap(),
            DensityMatrix::coherent_state(Complex64::new(0.7, -1.1), 32).unwrap(),
            DensityMatrix::thermal_state(1.7, 24).unwrap(),
            DensityMatrix::pure_superposition(
                &[Complex64::new(1.0, 0.0), Complex64::default(), Complex64::new(1.0, 0.0)],
                16,
            )
            .unwrap(),
        ];
        for rho in &states {
            let dim = rho.dim();
            let mut defect = 0.0f64;
            for m in 0..dim {
                for n in 0..dim {
                    defect = defect.max((rho.elem(m, n) - rho.elem(n, m).conj()).norm());
                }
            }
            assert!(defect <= HERMITICITY_TOL);
            let trace: Complex64 = (0..dim).map(|i| rho.elem(i, i)).sum();
            assert!((trace.re - 1.0).abs() <= TRACE_TOL);
            let min_eig = rho
                .elems()
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .fold(f64::INFINITY, |a, &b| a.min(b));
            assert!(min_eig >= -PSD_TOL);
        }
    }

    #[test]
    fn invalid_matrices_rejected() {
        // non-Hermitian
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
        // wrong trace
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
        // negative eigenvalue
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn mixture_weights_validated() {
        let a = DensityMatrix::vacuum(8).unwrap();
        let b = DensityMatrix::number_state(1, 8).unwrap();
        let rho = DensityMatrix::mixture(&[(0.25, a.clone()), (0.75, b.clone())]).unwrap();
        assert_abs_diff_eq!(rho.elem(0, 0).re, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.elem(1, 1).re, 0.75, epsilon = 1e-14);
        assert!(DensityMatrix::mixture(&[(0.5, a.clone()), (0.4, b.clone())]).is_err());
        let c = DensityMatrix::vacuum(4).unwrap();
        assert!(DensityMatrix::mixture(&[(0.5, a), (0.5, c)]).is_err());
    }

    #[test]
    fn husimi_vacuum_at_origin() {
        let rho = DensityMatrix::vacuum(16).unwrap();
        let v = husimi_direct(&rho, PhasePoint::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (2.0 * PI), epsilon = 1e-14);
    }

    #[test]
    fn husimi_coherent_closed_form() {
        let z0 = Complex64::new(0.9, -0.6);
        let rho = DensityMatrix::coherent_state(z0, 48).unwrap();
        for (q, p) in [(0.0, 0.0), (1.0, 0.5), (-1.4, 1.1), (2.0, -2.0)] {
            let pt = PhasePoint::new(q, p);
            let w = pt.amplitude();
            let expect = (-(w - z0).norm_sqr()).exp() / (2.0 * PI);
            let got = husimi_direct(&rho, pt).unwrap();
            assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn husimi_single_photon_closed_form() {
        let rho = DensityMatrix::number_state(1, 32).unwrap();
        for (q, p) in [(0.3, -0.2), (1.0, 1.0), (0.0, 2.0)] {
            let pt = PhasePoint::new(q, p);
            let zsq = pt.amplitude().norm_sqr();
            let expect = zsq * (-zsq).exp() / (2.0 * PI);
            assert_abs_diff_eq!(husimi_direct(&rho, pt).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn husimi_nonnegative_and_normalized() {
        let dim = 32;
        let states = [
            DensityMatrix::number_state(2, dim).unwrap(),
            DensityMatrix::coherent_state(Complex64::new(1.0, 0.5), dim).unwrap(),
            DensityMatrix::thermal_state(0.5, dim).unwrap(),
        ];
        let half_width = 2.0 * (2.0 * dim as f64).sqrt();
        let rule = GaussLegendre::new(140);
        let (xs, ws) = rule.scaled(-half_width, half_width);
        for rho in &states {
            let mut mass = 0.0;
            for (iq, &q) in xs.iter().enumerate() {
                for (ip, &p) in xs.iter().enumerate() {
                    let v = husimi_unchecked(rho, PhasePoint::new(q, p)).unwrap();
                    assert!(v >= -1e-12, "negative Husimi value {v}");
                    mass += ws[iq] * ws[ip] * v;
                }
            }
            assert!((mass - 1.0).abs() <= 1e-6, "Husimi mass {mass}");
        }
    }

    #[test]
    fn husimi_truncation_guard() {
        let rho = DensityMatrix::vacuum(8).unwrap();
        let res = husimi_direct(&rho, PhasePoint::new(4.0, 4.0));
        assert!(matches!(res, Err(Error::TruncationInadequate { .. })));
    }

    /// Defining-integral oracle for the Wigner function:
    /// `(1/2π) ∫ e^{-ipy} ⟨q + y/2|ρ|q - y/2⟩ dy`.
    fn wigner_oracle(rho: &DensityMatrix, pt: PhasePoint) -> f64 {
        let dim = rho.dim();
        let rule = GaussLegendre::new(400);
        let span = 2.0 * (2.0 * dim as f64).sqrt() + 8.0;
        let (ys, ws) = rule.scaled(-span, span);
        let mut acc = Complex64::default();
        let mut ha = vec![0.0; dim];
        let mut hb = vec![0.0; dim];
        for (i, &y) in ys.iter().enumerate() {
            hermite_functions(pt.q + 0.5 * y, &mut ha);
            hermite_functions(pt.q - 0.5 * y, &mut hb);
            let mut kernel = Complex64::default();
            for (m, &ham) in ha.iter().enumerate() {
                for (n, &hbn) in hb.iter().enumerate() {
                    kernel += rho.elem(m, n) * ham * hbn;
                }
            }
            acc += kernel * Complex64::from_polar(ws[i], -pt.p * y);
        }
        acc.re / (2.0 * PI)
    }

    #[test]
    fn wigner_reference_points() {
        let vac = DensityMatrix::vacuum(16).unwrap();
        assert_abs_diff_eq!(
            wigner(&vac, PhasePoint::new(0.0, 0.0)),
            1.0 / PI,
            epsilon = 1e-12
        );
        let one = DensityMatrix::number_state(1, 16).unwrap();
        assert_abs_diff_eq!(
            wigner(&one, PhasePoint::new(0.0, 0.0)),
            -1.0 / PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wigner_matches_defining_integral() {
        let states = [
            DensityMatrix::number_state(1, 10).unwrap(),
            DensityMatrix::coherent_state(Complex64::new(0.8, 0.4), 16).unwrap(),
            DensityMatrix::pure_superposition(
                &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
                10,
            )
            .unwrap(),
        ];
        for rho in &states {
            for (q, p) in [(0.0, 0.0), (0.7, -0.3), (-1.2, 0.9)] {
                let pt = PhasePoint::new(q, p);
                assert_abs_diff_eq!(wigner(rho, pt), wigner_oracle(rho, pt), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn wigner_normalized() {
        let dim = 24;
        let states = [
            DensityMatrix::vacuum(dim).unwrap(),
            DensityMatrix::number_state(1, dim).unwrap(),
            DensityMatrix::thermal_state(0.5, dim).unwrap(),
        ];
        let half_width = (2.0 * dim as f64).sqrt() + 4.0;
        let rule = GaussLegendre::new(160);
        let (xs, ws) = rule.scaled(-half_width, half_width);
        for rho in &states {
            let mut mass = 0.0;
            for (iq, &q) in xs.iter().enumerate() {
                for (ip, &p) in xs.iter().enumerate() {
                    mass += ws[iq] * ws[ip] * wigner(rho, PhasePoint::new(q, p));
                }
            }
            assert!((mass - 1.0).abs() <= 1e-8, "Wigner mass {mass}");
        }
    }

    #[test]
    fn phase_point_amplitude_roundtrip() {
        let pt = PhasePoint::new(1.3, -0.4);
        let z = pt.amplitude();
        assert_abs_diff_eq!(
            z.norm_sqr(),
            (pt.q * pt.q + pt.p * pt.p) / 2.0,
            epsilon = 1e-15
        );
        let back = PhasePoint::from_amplitude(z);
        assert_abs_diff_eq!(back.q, pt.q, epsilon = 1e-15);
        assert_abs_diff_eq!(back.p, pt.p, epsilon = 1e-15);
    }
}
