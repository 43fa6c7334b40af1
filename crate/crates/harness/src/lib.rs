//! Experiment runner for `laea-core`: JSON configs, parallel cells, CSV and
//! JSON outputs, result tables and golden prompt checks.

pub mod config;
pub mod experiments;
pub mod fixtures;
pub mod manifest;
pub mod output;
pub mod predictors;
pub mod table;

use std::path::{Path, PathBuf};

use anyhow::Result;

pub use config::ExperimentConfig;
pub use experiments::ExperimentOutput;
use manifest::Manifest;
use output::OutputDir;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub jobs: usize,
    /// Replaces the configured output directory.
    pub out: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1, out: None }
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub output: ExperimentOutput,
}

/// Runs every cell, aggregates, and writes the manifest.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    cfg.validate()?;
    let mut cfg = cfg.clone();
    if let Some(out) = &opts.out {
        cfg.output_dir = out.clone();
    }
    let out = OutputDir::create(&cfg.output_dir)?;
    log::info!("{}: writing to {}", cfg.experiment.as_str(), out.root().display());
    experiments::run(&cfg, &out, opts.jobs)?;
    let output = experiments::aggregate(&cfg, &out)?;
    Manifest::new(&cfg, output.failures.clone()).write(&out)?;
    Ok(RunReport { out_dir: cfg.output_dir.clone(), output })
}

/// Re-aggregates a finished results directory from its cells and manifest.
pub fn rebuild_tables(dir: &Path) -> Result<ExperimentOutput> {
    let out = OutputDir::open(dir)?;
    let manifest = Manifest::read(&out)?;
    experiments::aggregate(&manifest.config, &out)
}
