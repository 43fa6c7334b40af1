//! `manifest.json`: what ran, from which checkout, and how often the
//! surrogate had to fall back.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::output::OutputDir;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Per-arm counts accumulated over every cell.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureTally {
    /// Queries answered by fallback.
    pub fallbacks: usize,
    /// Runs cut short by a backend outage.
    pub incomplete_runs: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub git_describe: String,
    pub no_network: bool,
    pub config: ExperimentConfig,
    pub failures: BTreeMap<String, FailureTally>,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig, failures: BTreeMap<String, FailureTally>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            git_describe: git_describe(Path::new(".")),
            no_network: crate::predictors::no_network(),
            config: config.clone(),
            failures,
        }
    }

    pub fn write(&self, out: &OutputDir) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        out.write(MANIFEST_FILE, text.as_bytes())?;
        Ok(())
    }

    pub fn read(out: &OutputDir) -> Result<Self> {
        let text = out.read_to_string(MANIFEST_FILE)?;
        serde_json::from_str(&text).context("parsing manifest.json")
    }
}

/// `git describe --always --dirty` in `dir`, or `"unknown"` outside a checkout.
pub fn git_describe(dir: &Path) -> String {
    Command::new("git")
        .args(["describe", "--always", "--dirty"])
        .current_dir(dir)
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}
