//! The five experiments. Each runs its cells (one file per cell) and then
//! aggregates from disk, so `laea table` can redo the second step alone.

pub mod case2d;
pub mod compare;
pub mod select_acc;
pub mod timing;

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::config::{sanitize, ExperimentConfig};
use crate::manifest::FailureTally;
use crate::output::OutputDir;
use crate::table::ResultTable;

/// What an experiment hands back after aggregation.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub table: Option<ResultTable>,
    pub failures: BTreeMap<String, FailureTally>,
}

pub const SUMMARY_FILE: &str = "summary.csv";

/// Runs `f` over `cells` on a pool of `jobs` threads, keeping input order.
pub(crate) fn run_cells<C, T, F>(cells: &[C], jobs: usize, f: F) -> Result<Vec<T>>
where
    C: Sync,
    T: Send,
    F: Fn(&C) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    pool.install(|| cells.par_iter().map(&f).collect())
}

pub(crate) fn cell_path(arm: &str, stem: &str, ext: &str) -> String {
    format!("cells/{}/{stem}.{ext}", sanitize(arm))
}

pub(crate) fn write_json<T: Serialize>(out: &OutputDir, rel: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    out.write(rel, text.as_bytes())?;
    Ok(())
}

pub(crate) fn read_json<T: DeserializeOwned>(out: &OutputDir, rel: &str) -> Result<T> {
    let text = out.read_to_string(rel)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {rel}"))
}

pub(crate) fn csv_bytes<F>(fill: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w)?;
        w.flush()?;
    }
    Ok(buf)
}

pub(crate) fn write_summary(out: &OutputDir, table: &ResultTable) -> Result<()> {
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    out.write(SUMMARY_FILE, &buf)?;
    Ok(())
}

pub fn run(cfg: &ExperimentConfig, out: &OutputDir, jobs: usize) -> Result<()> {
    use crate::config::ExperimentKind::*;
    match cfg.experiment {
        Case2d => case2d::run_cells(cfg, out, jobs),
        SelectAcc => select_acc::run_cells(cfg, out, jobs),
        Compare | Preselect => compare::run_cells(cfg, out, jobs),
        Timing => timing::run_cells(cfg, out),
    }
}

pub fn aggregate(cfg: &ExperimentConfig, out: &OutputDir) -> Result<ExperimentOutput> {
    use crate::config::ExperimentKind::*;
    match cfg.experiment {
        Case2d => case2d::aggregate(cfg, out),
        SelectAcc => select_acc::aggregate(cfg, out),
        Compare | Preselect => compare::aggregate(cfg, out),
        Timing => timing::aggregate(cfg, out),
    }
}
