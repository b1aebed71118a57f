//! Strict config-file schema and its translation into core objects.
//!
//! The file is TOML; unknown keys are rejected everywhere, and kind-specific
//! state fields are cross-checked by hand so a `thermal` state with a stray
//! `z_re` fails loudly instead of being half-read.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tomoq_core::states::DEFAULT_DIM;
use tomoq_core::transform::{QuadratureScheme, ScalarField};
use tomoq_core::DensityMatrix;

use crate::CliError;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub state: Option<StateSpec>,
    pub grid: Option<GridSpec>,
    pub scheme: Option<SchemeSpec>,
    pub run: Option<RunSpec>,
    pub kernel_eval: Option<KernelEvalSpec>,
    pub inverse: Option<InverseSpec>,
    pub identities: Option<IdentitiesSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: String,
    pub dim: Option<usize>,
    pub n: Option<usize>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub nbar: Option<f64>,
    pub amplitudes: Option<Vec<[f64; 2]>>,
    pub components: Option<Vec<ComponentSpec>>,
}

/// One mixture component: any non-mixture kind, weighted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub weight: f64,
    pub kind: String,
    pub n: Option<usize>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub nbar: Option<f64>,
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpec {
    pub theta_nodes: usize,
    pub x_nodes: usize,
    pub x_limit: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEvalSpec {
    pub q: f64,
    pub p: f64,
    pub theta_nodes: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_nodes: usize,
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseSpec {
    pub theta: f64,
    pub x: f64,
    pub u: f64,
    pub v: f64,
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesSpec {
    pub pairs: Option<usize>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("config parse error: {e}")))
    }

    pub fn state(&self) -> Result<&StateSpec, CliError> {
        self.state
            .as_ref()
            .ok_or_else(|| CliError::config("missing [state] section".into()))
    }

    pub fn grid(&self) -> Result<&GridSpec, CliError> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::config("missing [grid] section".into()))
    }
}

fn reject_field(kind: &str, name: &str, present: bool) -> Result<(), CliError> {
    if present {
        return Err(CliError::config(format!(
            "state kind '{kind}' does not take field '{name}'"
        )));
    }
    Ok(())
}

fn complex_amplitudes(raw: &[[f64; 2]]) -> Vec<Complex64> {
    raw.iter().map(|a| Complex64::new(a[0], a[1])).collect()
}

/// Builds a non-mixture state from kind-specific fields.
fn build_simple(
    kind: &str,
    dim: usize,
    n: Option<usize>,
    z_re: Option<f64>,
    z_im: Option<f64>,
    nbar: Option<f64>,
    amplitudes: Option<&Vec<[f64; 2]>>,
) -> Result<DensityMatrix, CliError> {
    let state = match kind {
        "number" => {
            reject_field(kind, "z_re", z_re.is_some())?;
            reject_field(kind, "z_im", z_im.is_some())?;
            reject_field(kind, "nbar", nbar.is_some())?;
            reject_field(kind, "amplitudes", amplitudes.is_some())?;
            let n = n.ok_or_else(|| CliError::config("number state needs field 'n'".into()))?;
            DensityMatrix::number_state(n, dim)
        }
        "coherent" => {
            reject_field(kind, "n", n.is_some())?;
            reject_field(kind, "nbar", nbar.is_some())?;
            reject_field(kind, "amplitudes", amplitudes.is_some())?;
            let re = z_re
                .ok_or_else(|| CliError::config("coherent state needs field 'z_re'".into()))?;
            let im = z_im
                .ok_or_else(|| CliError::config("coherent state needs field 'z_im'".into()))?;
            DensityMatrix::coherent_state(Complex64::new(re, im), dim)
        }
        "thermal" => {
            reject_field(kind, "n", n.is_some())?;
            reject_field(kind, "z_re", z_re.is_some())?;
            reject_field(kind, "z_im", z_im.is_some())?;
            reject_field(kind, "amplitudes", amplitudes.is_some())?;
            let nbar =
                nbar.ok_or_else(|| CliError::config("thermal state needs field 'nbar'".into()))?;
            DensityMatrix::thermal_state(nbar, dim)
        }
        "pure_superposition" => {
            reject_field(kind, "n", n.is_some())?;
            reject_field(kind, "z_re", z_re.is_some())?;
            reject_field(kind, "z_im", z_im.is_some())?;
            reject_field(kind, "nbar", nbar.is_some())?;
            let amps = amplitudes.ok_or_else(|| {
                CliError::config("pure_superposition needs field 'amplitudes'".into())
            })?;
            DensityMatrix::pure_superposition(&complex_amplitudes(amps), dim)
        }
        other => {
            return Err(CliError::config(format!(
                "unknown state kind '{other}' (expected number, coherent, thermal, mixture or pure_superposition)"
            )))
        }
    };
    state.map_err(CliError::from)
}

impl StateSpec {
    pub fn dim(&self) -> usize {
        self.dim.unwrap_or(DEFAULT_DIM)
    }

    pub fn build(&self) -> Result<DensityMatrix, CliError> {
        let dim = self.dim();
        if dim == 0 {
            return Err(CliError::config("state dim must be positive".into()));
        }
        if self.kind == "mixture" {
            reject_field("mixture", "n", self.n.is_some())?;
            reject_field("mixture", "z_re", self.z_re.is_some())?;
            reject_field("mixture", "z_im", self.z_im.is_some())?;
            reject_field("mixture", "nbar", self.nbar.is_some())?;
            reject_field("mixture", "amplitudes", self.amplitudes.is_some())?;
            let comps = self
                .components
                .as_ref()
                .ok_or_else(|| CliError::config("mixture needs 'components'".into()))?;
            if comps.is_empty() {
                return Err(CliError::config("mixture needs at least one component".into()));
            }
            let mut built = Vec::with_capacity(comps.len());
            for c in comps {
                if c.kind == "mixture" {
                    return Err(CliError::config("mixtures cannot nest".into()));
                }
                let rho = build_simple(
                    &c.kind,
                    dim,
                    c.n,
                    c.z_re,
                    c.z_im,
                    c.nbar,
                    c.amplitudes.as_ref(),
                )?;
                built.push((c.weight, rho));
            }
            DensityMatrix::mixture(&built).map_err(CliError::from)
        } else {
            reject_field(&self.kind, "components", self.components.is_some())?;
            build_simple(
                &self.kind,
                dim,
                self.n,
                self.z_re,
                self.z_im,
                self.nbar,
                self.amplitudes.as_ref(),
            )
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<ScalarField, CliError> {
        ScalarField::new(self.q_min, self.q_max, self.p_min, self.p_max, self.nq, self.np)
            .map_err(CliError::from)
    }
}

impl Config {
    /// The quadrature scheme: explicit section if present, otherwise the
    /// dim-derived default.
    pub fn scheme_for(&self, dim: usize) -> Result<QuadratureScheme, CliError> {
        match &self.scheme {
            None => Ok(QuadratureScheme::default_for_dim(dim)),
            Some(s) => {
                let limit = s
                    .x_limit
                    .unwrap_or_else(|| QuadratureScheme::default_for_dim(dim).x_limit());
                QuadratureScheme::new(s.theta_nodes, s.x_nodes, limit).map_err(CliError::from)
            }
        }
    }
}
