//! Full optimization runs: LAEA variants (`compare`) or CoDE with
//! pre-selection (`preselect`), one run per (arm, problem, dim, seed).

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use laea_core::algorithms::{code_preselect_run, laea_run, write_trace_csv, LaeaConfig, PreselectConfig, RunResult};
use laea_core::problems::{BenchmarkProblem, ProblemName};
use serde::Deserialize;

use super::{cell_path, read_json, run_cells as par_cells, write_summary, ExperimentOutput};
use crate::config::{ArmSpec, ExperimentConfig, ExperimentKind};
use crate::output::OutputDir;
use crate::predictors::build;
use crate::table::{Comparison, Group};

pub const TABLE_FILE: &str = "table.txt";
pub const RANKS_FILE: &str = "ranks.csv";

fn stem(problem: ProblemName, dim: usize, seed: u64) -> String {
    format!("{}-{dim}-seed{seed}", problem.as_str())
}

/// One optimization run for a cell.
pub fn run_one(
    cfg: &ExperimentConfig,
    arm: &ArmSpec,
    problem: ProblemName,
    dim: usize,
    seed: u64,
) -> Result<RunResult> {
    let p = BenchmarkProblem::new(problem, dim)?;
    let budget = cfg.budget.context("missing budget")?;
    let built = build(&arm.predictor, &p, seed, None, None)?;
    let predictor = built.predictor.as_ref();
    let result = match cfg.experiment {
        ExperimentKind::Preselect => {
            let strategy = arm.strategy.context("arm has no strategy")?;
            code_preselect_run(&PreselectConfig { budget, seed, ..cfg.preselect }, &p, predictor, strategy)?
        }
        _ => {
            let variant = arm.variant.context("arm has no variant")?;
            laea_run(&LaeaConfig { budget, seed, variant, ..cfg.laea }, &p, predictor)?
        }
    };
    Ok(result)
}

pub fn run_cells(cfg: &ExperimentConfig, out: &OutputDir, jobs: usize) -> Result<()> {
    let mut cells = Vec::new();
    for arm in &cfg.arms {
        for &problem in &cfg.problems {
            for &dim in &cfg.dims {
                for seed in cfg.seed_list() {
                    cells.push((arm, problem, dim, seed));
                }
            }
        }
    }
    par_cells(&cells, jobs, |&(arm, problem, dim, seed)| {
        let r = run_one(cfg, arm, problem, dim, seed)?;
        let stem = stem(problem, dim, seed);
        let mut trace = Vec::new();
        write_trace_csv(&r.trace, &mut trace)?;
        out.write(&cell_path(&arm.name, &stem, "trace.csv"), &trace)?;
        let mut json = r.to_json()?;
        json.push('\n');
        out.write(&cell_path(&arm.name, &stem, "json"), json.as_bytes())?;
        Ok(())
    })?;
    Ok(())
}

/// The fields aggregation needs from a stored run.
#[derive(Debug, Deserialize)]
struct StoredRun {
    best_f: f64,
    failures: usize,
    complete: bool,
}

pub fn comparison(
    cfg: &ExperimentConfig,
    out: &OutputDir,
) -> Result<(Comparison, BTreeMap<String, crate::manifest::FailureTally>)> {
    let mut failures: BTreeMap<String, crate::manifest::FailureTally> = BTreeMap::new();
    let mut groups = Vec::new();
    for &problem in &cfg.problems {
        for &dim in &cfg.dims {
            let mut per_arm = Vec::with_capacity(cfg.arms.len());
            for arm in &cfg.arms {
                let tally = failures.entry(arm.name.clone()).or_default();
                let mut values = Vec::new();
                for seed in cfg.seed_list() {
                    let run: StoredRun = read_json(out, &cell_path(&arm.name, &stem(problem, dim, seed), "json"))?;
                    values.push(run.best_f);
                    tally.fallbacks += run.failures;
                    tally.incomplete_runs += usize::from(!run.complete);
                    tally.cells += 1;
                }
                per_arm.push(values);
            }
            groups.push(Group { problem: problem.as_str().into(), dim, per_arm });
        }
    }
    let reference_name = &cfg.reference().name;
    let reference = cfg.arms.iter().position(|a| &a.name == reference_name).context("reference arm")?;
    let arms = cfg.arms.iter().map(|a| a.name.clone()).collect();
    Ok((Comparison { metric: "best_f".into(), arms, reference, groups }, failures))
}

pub fn aggregate(cfg: &ExperimentConfig, out: &OutputDir) -> Result<ExperimentOutput> {
    let (cmp, failures) = comparison(cfg, out)?;
    let table = cmp.table()?;
    write_summary(out, &table)?;
    let mut ranks = Vec::new();
    cmp.write_ranks_csv(&mut ranks)?;
    out.write(RANKS_FILE, &ranks)?;
    out.write(TABLE_FILE, cmp.render_text()?.as_bytes())?;
    Ok(ExperimentOutput { table: Some(table), failures })
}
