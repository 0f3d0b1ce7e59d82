//! Run manifests: a JSON sidecar for every command that writes files,
//! recording the command line as given, every knob after defaulting, the
//! library version, per-stage timings, and the output paths — enough to
//! reproduce any output exactly.
//!
//! Timings make the manifest itself non-deterministic, so byte-identity
//! guarantees apply to images and CSVs only, never to manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub ms: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    /// The process arguments exactly as invoked.
    pub command: Vec<String>,
    /// Every configuration value after defaults were applied (sorted).
    pub resolved: BTreeMap<String, String>,
    /// Crate version that produced the outputs.
    pub version: String,
    /// Wall-clock per stage, in invocation order.
    pub timings_ms: Vec<StageTiming>,
    /// Files written by this run.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new() -> Self {
        RunManifest {
            command: std::env::args().collect(),
            resolved: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timings_ms: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Record one resolved configuration value.
    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.resolved.insert(key.to_string(), value.to_string());
    }

    /// Record an output file path.
    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Run a stage, timing it.
    pub fn stage<T, E>(
        &mut self,
        name: &str,
        f: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E> {
        let started = Instant::now();
        let result = f();
        self.timings_ms.push(StageTiming {
            stage: name.to_string(),
            ms: started.elapsed().as_secs_f64() * 1e3,
        });
        result
    }

    /// Serialize next to the outputs it describes.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut json = serde_json::to_vec_pretty(self)
            .map_err(|e| CliError::BadFile(format!("manifest serialization: {e}")))?;
        json.push(b'\n');
        std::fs::write(path, json).map_err(|e| CliError::io(path, e))
    }
}

impl Default for RunManifest {
    fn default() -> Self {
        Self::new()
    }
}

/// The manifest path for a given output: `foo.pgm` → `foo.pgm.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}
