//! Subcommand implementations.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use tomoq_core::inverse::divergence_scan;
use tomoq_core::kernel::{kernel_closed, kernel_series};
use tomoq_core::quadrature::{EhtSampler, SamplerSpec};
use tomoq_core::states::{husimi_direct, DensityMatrix, PhasePoint};
use tomoq_core::transform::{
    coherent_identity_check, hermite_gaussian_moment_check, husimi_from_kernel_many,
    husimi_mc_estimate, radon_wigner_check,
};

use crate::config::Config;
use crate::output::{write_metadata, CsvWriter, Metadata};
use crate::{CliError, SeededRng};

/// Maximum tolerated gap between the kernel transform and direct Husimi
/// under `--compare`.
pub const COMPARE_TOL: f64 = 1e-5;

const COHERENT_IDENTITY_TOL: f64 = 1e-6;
const MOMENT_REL_TOL: f64 = 1e-8;
const MOMENT_ABS_TOL: f64 = 1e-9;
const RADON_TOL: f64 = 1e-6;

pub struct RunContext<'a> {
    pub config: &'a Config,
    pub subcommand: &'a str,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: &'a Path,
    pub started: Instant,
}

impl RunContext<'_> {
    fn finish(
        &self,
        rows: usize,
        effective_dim: Option<usize>,
        extra: serde_json::Map<String, serde_json::Value>,
    ) -> Result<(), CliError> {
        let meta = Metadata {
            artifact: "tomoq",
            version: env!("CARGO_PKG_VERSION"),
            schema_version: 1,
            subcommand: self.subcommand,
            config: self.config,
            state_spec_sha256: crate::output::state_spec_hash(self.config),
            effective_dim,
            effective_seed: self.seed,
            threads: self.threads,
            rows,
            wall_time_ms: self.started.elapsed().as_millis(),
            extra,
        };
        write_metadata(self.output, &meta)?;
        Ok(())
    }

    fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::config("a seed is required: set [run].seed or pass --seed".into())
        })
    }

    fn require_samples(&self) -> Result<usize, CliError> {
        let n = self
            .config
            .run
            .as_ref()
            .and_then(|r| r.n_samples)
            .ok_or_else(|| CliError::config("missing [run].n_samples".into()))?;
        if n == 0 {
            return Err(CliError::config("n_samples must be positive".into()));
        }
        Ok(n)
    }
}

pub fn husimi_direct_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let rho = ctx.config.state()?.build()?;
    let field = ctx.config.grid()?.build()?;
    let pts = field.points();
    let values: Result<Vec<f64>, _> = pts.par_iter().map(|&pt| husimi_direct(&rho, pt)).collect();
    let values = values?;
    let mut csv = CsvWriter::create(ctx.output, "q,p,value")?;
    for (pt, v) in pts.iter().zip(&values) {
        csv.row(&[pt.q, pt.p, *v])?;
    }
    let (rows, _) = csv.finish()?;
    ctx.finish(rows, Some(rho.dim()), serde_json::Map::new())
}

pub fn husimi_kernel_cmd(ctx: &RunContext<'_>, compare: bool) -> Result<(), CliError> {
    let rho = ctx.config.state()?.build()?;
    let field = ctx.config.grid()?.build()?;
    let scheme = ctx.config.scheme_for(rho.dim())?;
    let pts = field.points();
    let values = husimi_from_kernel_many(&rho, &pts, &scheme)?;
    let mut extra = serde_json::Map::new();
    extra.insert(
        "effective_scheme".into(),
        json!({
            "theta_nodes": scheme.theta_nodes(),
            "x_nodes": scheme.x_nodes(),
            "x_limit": scheme.x_limit(),
        }),
    );
    if compare {
        let direct: Result<Vec<f64>, _> =
            pts.par_iter().map(|&pt| husimi_direct(&rho, pt)).collect();
        let direct = direct?;
        let max_diff = values
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        extra.insert("compare_max_abs_diff".into(), json!(max_diff));
        if max_diff > COMPARE_TOL {
            return Err(CliError::numeric(format!(
                "kernel transform deviates from direct Husimi by {max_diff:e} (tolerance {COMPARE_TOL:e})"
            )));
        }
    }
    let mut csv = CsvWriter::create(ctx.output, "q,p,value")?;
    for (pt, v) in pts.iter().zip(&values) {
        csv.row(&[pt.q, pt.p, *v])?;
    }
    let (rows, _) = csv.finish()?;
    ctx.finish(rows, Some(rho.dim()), extra)
}

pub fn husimi_mc_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let rho = ctx.config.state()?.build()?;
    let field = ctx.config.grid()?.build()?;
    let n = ctx.require_samples()?;
    let seed = ctx.require_seed()?;
    if n < 2 {
        return Err(CliError::config("n_samples must be at least 2".into()));
    }
    let sampler = EhtSampler::new(&rho, SamplerSpec::default())?;
    let samples = sampler.sample(n, seed);
    let pts = field.points();
    let estimates: Vec<_> = pts
        .par_iter()
        .map(|&pt| husimi_mc_estimate(&samples, pt))
        .collect();
    let mut csv = CsvWriter::create(ctx.output, "q,p,value")?;
    for (pt, est) in pts.iter().zip(&estimates) {
        csv.row(&[pt.q, pt.p, est.mean])?;
    }
    let (rows, _) = csv.finish()?;
    let stderr_max = estimates.iter().map(|e| e.stderr).fold(0.0f64, f64::max);
    let mut extra = serde_json::Map::new();
    extra.insert("n_samples".into(), json!(n));
    extra.insert("stderr_max".into(), json!(stderr_max));
    ctx.finish(rows, Some(rho.dim()), extra)
}

pub fn sample_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let rho = ctx.config.state()?.build()?;
    let n = ctx.require_samples()?;
    let seed = ctx.require_seed()?;
    let sampler = EhtSampler::new(&rho, SamplerSpec::default())?;
    let samples = sampler.sample(n, seed);
    let mut csv = CsvWriter::create(ctx.output, "theta,x")?;
    for s in &samples {
        csv.row(&[s.theta, s.x])?;
    }
    let (rows, _) = csv.finish()?;
    ctx.finish(rows, Some(rho.dim()), serde_json::Map::new())
}

pub fn kernel_eval_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let spec = ctx
        .config
        .kernel_eval
        .as_ref()
        .ok_or_else(|| CliError::config("missing [kernel_eval] section".into()))?;
    if spec.theta_nodes == 0 || spec.x_nodes == 0 {
        return Err(CliError::config("kernel_eval node counts must be positive".into()));
    }
    if spec.x_min.is_nan() || spec.x_max.is_nan() || spec.x_min >= spec.x_max {
        return Err(CliError::config("kernel_eval needs x_min < x_max".into()));
    }
    let k_max = spec.k_max.unwrap_or(48);
    let pt = PhasePoint::new(spec.q, spec.p);
    // evaluate everything before touching the output, so a shift outside
    // the series window cannot leave a partial artifact behind
    let mut table = Vec::with_capacity(spec.theta_nodes * spec.x_nodes);
    for i in 0..spec.theta_nodes {
        let theta = 2.0 * PI * i as f64 / spec.theta_nodes as f64;
        for j in 0..spec.x_nodes {
            let x = if spec.x_nodes == 1 {
                spec.x_min
            } else {
                spec.x_min + (spec.x_max - spec.x_min) * j as f64 / (spec.x_nodes - 1) as f64
            };
            let closed = kernel_closed(pt, theta, x);
            let series = kernel_series(pt, theta, x, k_max)?;
            table.push([theta, x, closed, series, (closed - series).abs()]);
        }
    }
    let mut csv = CsvWriter::create(ctx.output, "theta,x,M_closed,M_series,abs_diff")?;
    for row in &table {
        csv.row(row)?;
    }
    let (rows, _) = csv.finish()?;
    let mut extra = serde_json::Map::new();
    extra.insert("k_max".into(), json!(k_max));
    ctx.finish(rows, None, extra)
}

pub fn check_identities_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let spec = ctx.config.identities.clone().unwrap_or(crate::config::IdentitiesSpec {
        pairs: None,
        seed: None,
    });
    let pairs = spec.pairs.unwrap_or(20);
    let seed = ctx.seed.or(spec.seed).unwrap_or(7);
    let dim = ctx
        .config
        .state
        .as_ref()
        .map(|s| s.dim())
        .unwrap_or(tomoq_core::states::DEFAULT_DIM);
    let scheme = ctx.config.scheme_for(dim)?;

    let mut rng = SeededRng::new(seed);
    let mut coherent_max = 0.0f64;
    for _ in 0..pairs {
        let z = rng.disk_point(2.0);
        let w = rng.disk_point(2.0);
        coherent_max = coherent_max.max(coherent_identity_check(z, w, &scheme));
    }

    let mut moment_rel_max = 0.0f64;
    for k in 0..=10 {
        for y in [0.5, 1.0, 1.5, 2.0] {
            moment_rel_max = moment_rel_max.max(hermite_gaussian_moment_check(k, y));
        }
    }
    let mut moment_abs_max = 0.0f64;
    for k in 1..=10 {
        moment_abs_max = moment_abs_max.max(hermite_gaussian_moment_check(k, 0.0));
    }

    let radon_states = [
        DensityMatrix::vacuum(dim)?,
        DensityMatrix::number_state(1, dim)?,
        DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), dim)?,
    ];
    let radon_points = [(0.0, 0.0), (0.7, 1.0), (PI / 3.0, -1.3), (2.1, 2.2), (5.0, -0.4)];
    let mut radon_max = 0.0f64;
    for rho in &radon_states {
        for &(theta, x) in &radon_points {
            radon_max = radon_max.max(radon_wigner_check(rho, theta, x));
        }
    }

    let checks = [
        ("coherent_identity", coherent_max, COHERENT_IDENTITY_TOL),
        ("hermite_gaussian_moment_rel", moment_rel_max, MOMENT_REL_TOL),
        ("hermite_gaussian_moment_abs_y0", moment_abs_max, MOMENT_ABS_TOL),
        ("radon_wigner", radon_max, RADON_TOL),
    ];
    let mut csv = CsvWriter::create(ctx.output, "check,max_residual,threshold,pass")?;
    let mut extra = serde_json::Map::new();
    let mut all_pass = true;
    for (name, residual, threshold) in checks {
        let pass = residual <= threshold;
        all_pass &= pass;
        csv.row_tagged(name, &[residual, threshold], if pass { "true" } else { "false" })?;
        extra.insert(name.into(), json!(residual));
    }
    let (rows, _) = csv.finish()?;
    ctx.finish(rows, Some(dim), extra)?;
    if !all_pass {
        return Err(CliError::numeric(
            "one or more identity checks exceeded their thresholds (see report)".into(),
        ));
    }
    Ok(())
}

pub fn inverse_divergence_cmd(ctx: &RunContext<'_>) -> Result<(), CliError> {
    let spec = ctx
        .config
        .inverse
        .as_ref()
        .ok_or_else(|| CliError::config("missing [inverse] section".into()))?;
    let scan = divergence_scan(spec.theta, spec.x, spec.u, spec.v, &spec.radii)?;
    let mut csv = CsvWriter::create(
        ctx.output,
        "R,magnitude,log_magnitude_minus_half_R_squared",
    )?;
    let residuals = scan.growth_residuals();
    for ((&r, &m), &resid) in scan.radii().iter().zip(scan.magnitudes()).zip(&residuals) {
        csv.row(&[r, m, resid])?;
    }
    let (rows, _) = csv.finish()?;
    ctx.finish(rows, None, serde_json::Map::new())
}
