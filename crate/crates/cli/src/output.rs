//! CSV artifacts and the metadata sidecar.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Config;
use crate::CliError;

/// 17-significant-digit decimal rendering, used for every numeric CSV field
/// so artifacts are bit-faithful and diffable.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvWriter {
    path: PathBuf,
    writer: BufWriter<File>,
    rows: usize,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> Result<Self, CliError> {
        let file = File::create(path)
            .map_err(|e| CliError::config(format!("cannot create {}: {e}", path.display())))?;
        let mut writer = BufWriter::new(file);
        writeln!(writer, "{header}").map_err(CliError::io)?;
        Ok(CsvWriter {
            path: path.to_path_buf(),
            writer,
            rows: 0,
        })
    }

    pub fn row(&mut self, fields: &[f64]) -> Result<(), CliError> {
        let line: Vec<String> = fields.iter().map(|&v| fmt(v)).collect();
        writeln!(self.writer, "{}", line.join(",")).map_err(CliError::io)?;
        self.rows += 1;
        Ok(())
    }

    /// Row with a trailing non-numeric field (e.g. a pass flag).
    pub fn row_tagged(&mut self, name: &str, fields: &[f64], tag: &str) -> Result<(), CliError> {
        let nums: Vec<String> = fields.iter().map(|&v| fmt(v)).collect();
        writeln!(self.writer, "{name},{},{tag}", nums.join(",")).map_err(CliError::io)?;
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(usize, PathBuf), CliError> {
        self.writer.flush().map_err(CliError::io)?;
        Ok((self.rows, self.path))
    }
}

/// Sidecar describing the run: resolved configuration, artifact version and
/// wall time, written next to the CSV as `<output>.meta.json`.
#[derive(Serialize)]
pub struct Metadata<'a> {
    pub artifact: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub subcommand: &'a str,
    pub config: &'a Config,
    /// SHA-256 of the state section's canonical JSON, for artifact matching.
    pub state_spec_sha256: Option<String>,
    pub effective_dim: Option<usize>,
    pub effective_seed: Option<u64>,
    pub threads: Option<usize>,
    pub rows: usize,
    pub wall_time_ms: u128,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

pub fn state_spec_hash(config: &Config) -> Option<String> {
    use sha2::{Digest, Sha256};
    let state = config.state.as_ref()?;
    let canonical = serde_json::to_string(state).ok()?;
    let digest = Sha256::digest(canonical.as_bytes());
    Some(format!("{digest:x}"))
}

pub fn write_metadata(output: &Path, meta: &Metadata<'_>) -> Result<PathBuf, CliError> {
    let mut path = output.as_os_str().to_owned();
    path.push(".meta.json");
    let path = PathBuf::from(path);
    let text = serde_json::to_string_pretty(meta)
        .map_err(|e| CliError::config(format!("metadata serialization failed: {e}")))?;
    std::fs::write(&path, text).map_err(CliError::io)?;
    Ok(path)
}
