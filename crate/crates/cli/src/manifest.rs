//! Run manifests: one sidecar JSON per invocation recording what ran, on
//! which inputs (by digest), and how long it took. Outputs themselves are
//! deterministic given inputs and seed; the manifest is the audit trail.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    /// sha256 of each input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

pub struct ManifestBuilder {
    command: String,
    seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    details: Option<serde_json::Value>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> ManifestBuilder {
        ManifestBuilder {
            command: command.to_string(),
            seed: None,
            inputs: BTreeMap::new(),
            details: None,
            started: Instant::now(),
        }
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    pub fn input(&mut self, path: &Path, contents: &str) -> &mut Self {
        let digest = Sha256::digest(contents.as_bytes());
        self.inputs
            .insert(path.display().to_string(), format!("{digest:x}"));
        self
    }

    pub fn details(&mut self, value: serde_json::Value) -> &mut Self {
        self.details = Some(value);
        self
    }

    /// Writes `<target>.manifest.json` next to `target` (or the bare file
    /// when `target` is a directory-less name).
    pub fn write_beside(&self, target: &Path) -> Result<PathBuf> {
        let mut name = target.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = target.with_file_name(name);
        let manifest = RunManifest {
            command: self.command.clone(),
            arguments: std::env::args().skip(1).collect(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs.clone(),
            elapsed_ms: self.started.elapsed().as_millis(),
            details: self.details.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Resolves an output path against the optional output-directory override
/// (`ORQ_OUT_DIR`), the one environment knob the tool honors.
pub fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os("ORQ_OUT_DIR") {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}
