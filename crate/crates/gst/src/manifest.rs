use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{ConfigError, RunError};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Every configuration key, see [`RunConfig::to_pairs`].
    pub config: BTreeMap<String, String>,
    pub dataset_id: String,
    pub git_describe: String,
    pub seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    /// Output files relative to the run directory.
    pub outputs: BTreeMap<String, String>,
    pub summary: RunSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub pipeline: String,
    pub best_epoch: usize,
    pub val_acc: f64,
    pub test_acc: f64,
    pub sparsity: f64,
    pub active_edges: usize,
    pub num_edges: usize,
    pub spectral_preservation: Option<f64>,
    /// Matrix the preservation ratio was computed on.
    pub spectral_matrix: String,
}

impl RunManifest {
    pub fn run_config(&self) -> Result<RunConfig, ConfigError> {
        RunConfig::from_pairs(&self.config)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_owned(),
            source: e,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| RunError::Config(ConfigError::Invalid(format!("{}: {e}", path.display()))))
    }

    pub fn save(&self, path: &Path) -> Result<(), RunError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json + "\n").map_err(RunError::output(path))
    }
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// `git describe --always --dirty` of the working directory, or `unknown`.
pub fn git_describe() -> String {
    std::process::Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_owned())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}
