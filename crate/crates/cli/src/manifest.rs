//! Run manifests tie every output file to the configuration that produced it.
//!
//! The manifest id hashes only the inputs (command, canonical config, extra command
//! arguments and the code version), never timestamps, so re-running a command
//! reproduces the same id and byte-identical result files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::FileConfig;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Hex characters kept from the SHA-256 digest.
const ID_LEN: usize = 16;

pub fn manifest_id(command: &str, config: &FileConfig, extra: &str) -> String {
    let mut h = Sha256::new();
    for part in [command, &config.canonical_json(), extra, VERSION] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    hex::encode(h.finalize())[..ID_LEN].to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub manifest_id: String,
    pub command: String,
    pub arguments: String,
    pub version: String,
    pub seed: u64,
    pub config: FileConfig,
    /// Seconds since the Unix epoch.
    pub started_unix: f64,
    pub finished_unix: f64,
    /// Output file names relative to the manifest's directory.
    pub outputs: Vec<String>,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

impl RunManifest {
    pub fn new(command: &str, config: &FileConfig, arguments: &str) -> Self {
        Self {
            manifest_id: manifest_id(command, config, arguments),
            command: command.to_string(),
            arguments: arguments.to_string(),
            version: VERSION.to_string(),
            seed: config.engine.seed,
            config: config.clone(),
            started_unix: unix_now(),
            finished_unix: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn write(mut self, dir: &Path) -> Result<PathBuf> {
        self.finished_unix = unix_now();
        let path = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self)?;
        fs::write(&path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text =
            fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Checks that every output listed in the manifest of `dir` carries its id.
pub fn verify_outputs(dir: &Path) -> Result<()> {
    let manifest = RunManifest::read(dir)?;
    for name in &manifest.outputs {
        let text = fs::read_to_string(dir.join(name))
            .with_context(|| format!("missing output {name}"))?;
        let found = if name.ends_with(".json") {
            let v: serde_json::Value = serde_json::from_str(&text)?;
            v.get("manifest_id").and_then(|m| m.as_str()).map(str::to_string)
        } else {
            csv_manifest_ids(&text)?
        };
        match found {
            Some(id) if id == manifest.manifest_id => {}
            Some(id) => bail!("{name} belongs to manifest {id}, expected {}", manifest.manifest_id),
            None => bail!("{name} carries no manifest id"),
        }
    }
    Ok(())
}

/// The single manifest id of a CSV file with a `manifest_id` column, or an error if
/// rows disagree.
fn csv_manifest_ids(text: &str) -> Result<Option<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let Some(col) = rdr.headers()?.iter().position(|h| h == "manifest_id") else {
        return Ok(None);
    };
    let mut id: Option<String> = None;
    for rec in rdr.records() {
        let rec = rec?;
        let this = rec.get(col).unwrap_or_default();
        match &id {
            Some(prev) if prev != this => bail!("rows carry different manifest ids"),
            Some(_) => {}
            None => id = Some(this.to_string()),
        }
    }
    Ok(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_depends_on_inputs_only() {
        let cfg = FileConfig::default();
        let a = manifest_id("simulate", &cfg, "");
        assert_eq!(a.len(), ID_LEN);
        assert_eq!(a, manifest_id("simulate", &cfg, ""));
        assert_ne!(a, manifest_id("compare", &cfg, ""));
        let mut other = cfg.clone();
        other.engine.seed = 1;
        assert_ne!(a, manifest_id("simulate", &other, ""));
        assert_ne!(a, manifest_id("simulate", &cfg, "M=1"));
    }
}
