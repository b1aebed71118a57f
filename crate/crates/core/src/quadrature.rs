//! Rotated quadrature densities and sampling of the joint homodyne
//! distribution over `(θ, x)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::states::{hermite_functions, DensityMatrix};

/// One simulated homodyne outcome: local-oscillator phase and quadrature
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadratureSample {
    pub theta: f64,
    pub x: f64,
}

/// Rotated-quadrature density `ρ^{Q_θ}(x)` for a fixed phase, cached as the
/// real symmetric matrix `Re(ρ_{mn} e^{-i(m-n)θ})`.
///
/// The density is the quadratic form of that matrix with the Hermite
/// function vector at `x`.
#[derive(Debug, Clone)]
pub struct RotatedDensity {
    dim: usize,
    re: Vec<f64>,
}

impl RotatedDensity {
    pub fn new(rho: &DensityMatrix, theta: f64) -> Self {
        let dim = rho.dim();
        let mut re = vec![0.0; dim * dim];
        for m in 0..dim {
            for n in 0..dim {
                let phase_angle = -((m as f64) - (n as f64)) * theta;
                let phase = num_complex::Complex64::from_polar(1.0, phase_angle);
                re[m * dim + n] = (rho.elem(m, n) * phase).re;
            }
        }
        RotatedDensity { dim, re }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Density from a precomputed Hermite vector `h[n] = h_n(x)`.
    #[inline]
    pub fn eval_with(&self, h: &[f64]) -> f64 {
        debug_assert_eq!(h.len(), self.dim);
        let mut acc = 0.0;
        for m in 0..self.dim {
            let row = &self.re[m * self.dim..(m + 1) * self.dim];
            let mut off = 0.0;
            for n in m + 1..self.dim {
                off += row[n] * h[n];
            }
            acc += h[m] * (row[m] * h[m] + 2.0 * off);
        }
        acc
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut h = vec![0.0; self.dim];
        hermite_functions(x, &mut h);
        self.eval_with(&h)
    }
}

/// `ρ^{Q_θ}(x) = Σ_{mn} ρ_{mn} e^{-iθ(m-n)} h_m(x) h_n(x)`.
///
/// The phase sign follows the convention in which a coherent state `z` has
/// mean quadrature `sqrt(2) Re(z e^{-iθ})` at phase `θ`; the tests pin this
/// against the coherent closed form.
pub fn quad_density(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    RotatedDensity::new(rho, theta).eval(x)
}

/// Tabulated CDF of one rotated density, used for inverse-CDF draws.
#[derive(Debug, Clone)]
pub struct SamplerTable {
    theta: f64,
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

/// Mass tolerance for tabulated densities.
const MASS_TOL: f64 = 1e-6;

impl SamplerTable {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Piecewise-linear CDF, clamped to `[0, 1]` outside the grid.
    pub fn cdf_at(&self, x: f64) -> f64 {
        if x <= self.grid[0] {
            return 0.0;
        }
        if x >= *self.grid.last().unwrap() {
            return 1.0;
        }
        let i = self.grid.partition_point(|&g| g <= x);
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = (x - x0) / (x1 - x0);
        (c0 + t * (c1 - c0)).clamp(0.0, 1.0)
    }

    /// Inverse CDF by binary search plus linear interpolation in the cell.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let i = self
            .cdf
            .partition_point(|&c| c < u)
            .clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        if c1 <= c0 {
            return x0;
        }
        x0 + (u - c0) / (c1 - c0) * (x1 - x0)
    }
}

/// Piecewise-linear CDF lookup, clamped to `[0, 1]`.
pub fn quad_cdf(table: &SamplerTable, x: f64) -> f64 {
    table.cdf_at(x)
}

/// Tabulates `quad_density` on a uniform grid spanning
/// `[-L, L]`, `L = sqrt(2 dim) + 5`, and accumulates the trapezoid CDF.
///
/// Fails when the accumulated mass differs from 1 by more than 1e-6, which
/// signals an inadequate truncation or grid.
pub fn build_sampler(rho: &DensityMatrix, theta: f64, x_nodes: usize) -> Result<SamplerTable> {
    if x_nodes < 2 {
        return Err(Error::InvalidArgument(
            "sampler grid needs at least two nodes".into(),
        ));
    }
    let dim = rho.dim();
    let limit = (2.0 * dim as f64).sqrt() + 5.0;
    let rotated = RotatedDensity::new(rho, theta);
    let step = 2.0 * limit / (x_nodes - 1) as f64;
    let mut grid = Vec::with_capacity(x_nodes);
    let mut density = Vec::with_capacity(x_nodes);
    let mut h = vec![0.0; dim];
    for i in 0..x_nodes {
        let x = -limit + step * i as f64;
        hermite_functions(x, &mut h);
        grid.push(x);
        // negative rounding noise is clipped so the CDF is exactly monotone
        density.push(rotated.eval_with(&h).max(0.0));
    }
    let mut cdf = Vec::with_capacity(x_nodes);
    cdf.push(0.0);
    let mut acc = 0.0;
    for i in 1..x_nodes {
        acc += 0.5 * (density[i - 1] + density[i]) * step;
        cdf.push(acc);
    }
    let mass = acc;
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(Error::MassDeficit {
            mass,
            tol: MASS_TOL,
        });
    }
    for c in &mut cdf {
        *c /= mass;
    }
    Ok(SamplerTable { theta, grid, cdf })
}

/// Discretization used by the joint sampler: number of phase bins on
/// `[0, 2π)` and nodes per CDF table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerSpec {
    pub phase_bins: usize,
    pub x_nodes: usize,
}

impl Default for SamplerSpec {
    fn default() -> Self {
        SamplerSpec {
            phase_bins: 360,
            x_nodes: 4001,
        }
    }
}

/// Samples in each parallel chunk; fixed so the chunk-to-stream mapping (and
/// therefore the output) does not depend on the thread count.
const SAMPLE_CHUNK: usize = 1 << 16;

/// Inverse-CDF sampler for the joint homodyne distribution: the phase is
/// uniform over the discrete bins, the quadrature follows the cached table
/// of that bin.
#[derive(Debug, Clone)]
pub struct EhtSampler {
    tables: Vec<SamplerTable>,
}

impl EhtSampler {
    pub fn new(rho: &DensityMatrix, spec: SamplerSpec) -> Result<Self> {
        if spec.phase_bins == 0 {
            return Err(Error::InvalidArgument("need at least one phase bin".into()));
        }
        let tables: Result<Vec<SamplerTable>> = (0..spec.phase_bins)
            .into_par_iter()
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / spec.phase_bins as f64;
                build_sampler(rho, theta, spec.x_nodes)
            })
            .collect();
        Ok(EhtSampler { tables: tables? })
    }

    pub fn phase_bins(&self) -> usize {
        self.tables.len()
    }

    pub fn tables(&self) -> &[SamplerTable] {
        &self.tables
    }

    /// Draws `n` samples, deterministic in `(seed, n)`: sample index space
    /// is split into fixed chunks, each driven by its own counter-derived
    /// stream of a seeded ChaCha generator.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<QuadratureSample> {
        let bins = self.tables.len();
        let mut out = vec![QuadratureSample::default(); n];
        out.par_chunks_mut(SAMPLE_CHUNK)
            .enumerate()
            .for_each(|(chunk_idx, chunk)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(chunk_idx as u64 + 1);
                for slot in chunk {
                    let bin = rng.gen_range(0..bins);
                    let u: f64 = rng.gen();
                    let table = &self.tables[bin];
                    *slot = QuadratureSample {
                        theta: table.theta(),
                        x: table.inverse_cdf(u),
                    };
                }
            });
        out
    }
}

/// Builds the default sampler for `rho` and draws `n` joint samples.
pub fn sample_eht(rho: &DensityMatrix, n: usize, seed: u64) -> Result<Vec<QuadratureSample>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    Ok(EhtSampler::new(rho, SamplerSpec::default())?.sample(n, seed))
}
