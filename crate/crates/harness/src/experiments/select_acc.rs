//! Selection accuracy: given the parents of a recorded GA generation as
//! training data, how well does the predictor pick the better half of the
//! offspring?

use std::collections::BTreeMap;
use std::io::BufReader;

use anyhow::{Context, Result};
use laea_core::algorithms::{
    ga_collect_run, read_dataset_csv, write_dataset_csv, GaCollectConfig, GaDataset, GaRecord,
};
use laea_core::problems::{BenchmarkProblem, ProblemName};
use laea_core::stats::{mean, precision_recall_f1, sample_std, ConfusionCounts};
use laea_core::surrogate::{assign_labels_topk, predict_batch, LabelRule, SurrogateRequest, SurrogateTask};
use serde::{Deserialize, Serialize};

use super::{cell_path, csv_bytes, read_json, run_cells as par_cells, write_json, write_summary, ExperimentOutput};
use crate::config::{ArmSpec, ExperimentConfig};
use crate::manifest::FailureTally;
use crate::output::OutputDir;
use crate::predictors::build;
use crate::table::{render_grid, ResultRow, ResultTable};

pub const STAGE_FILE: &str = "f1_by_stage.csv";
pub const SELECTION_FILE: &str = "selection.txt";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordScore {
    pub run: usize,
    pub gen: usize,
    pub task: SurrogateTask,
    pub counts: ConfusionCounts,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectCell {
    pub arm: String,
    pub problem: ProblemName,
    pub dim: usize,
    pub failures: usize,
    pub scores: Vec<RecordScore>,
}

fn dataset_name(problem: ProblemName, dim: usize) -> String {
    format!("{}-{dim}.csv", problem.as_str())
}

fn collect_config(cfg: &ExperimentConfig) -> GaCollectConfig {
    GaCollectConfig { ga: cfg.select_acc.ga, generations: cfg.select_acc.generations.clone(), seeds: cfg.seed_list() }
}

/// Loads `{problem}-{dim}.csv` from the configured dataset directory.
pub fn load_dataset(cfg: &ExperimentConfig, problem: ProblemName, dim: usize) -> Result<GaDataset> {
    let dir = cfg.select_acc.dataset_dir.as_ref().context("no dataset directory configured")?;
    let path = dir.join(dataset_name(problem, dim));
    let file = std::fs::File::open(&path)
        .map_err(|e| laea_core::Error::InvalidState(format!("missing dataset {}: {e}", path.display())))?;
    let data = read_dataset_csv(BufReader::new(file))?;
    if data.dim != dim {
        return Err(laea_core::Error::InvalidState(format!("{} holds {}-D points", path.display(), data.dim)).into());
    }
    Ok(data)
}

/// Scores one recorded generation for both tasks. Returns the scores and
/// the number of fallback answers.
pub fn score_record(
    arm: &ArmSpec,
    problem: &BenchmarkProblem,
    seed: u64,
    rec: &GaRecord,
) -> Result<(Vec<RecordScore>, usize)> {
    let train_x: Vec<Vec<f64>> = rec.parents.iter().map(|s| s.x.clone()).collect();
    let train_f: Vec<f64> = rec.parents.iter().map(|s| s.f()).collect();
    let queries: Vec<Vec<f64>> = rec.offspring.iter().map(|s| s.x.clone()).collect();
    let query_f: Vec<f64> = rec.offspring.iter().map(|s| s.f()).collect();
    let truth = assign_labels_topk(&query_f, 0.5);

    let built = build(&arm.predictor, problem, seed, None, None)?;
    let mut scores = Vec::with_capacity(2);
    let mut failures = 0;
    for task in [SurrogateTask::Reg, SurrogateTask::Cla] {
        let req = SurrogateRequest {
            task,
            train_x: &train_x,
            train_f: &train_f,
            rule: LabelRule::QueryHalf,
            queries: &queries,
        };
        let outcome = predict_batch(built.predictor.as_ref(), &req)?;
        failures += outcome.failures;
        let picked = match task {
            SurrogateTask::Reg => assign_labels_topk(&outcome.values(), 0.5),
            SurrogateTask::Cla => outcome.labels(),
        };
        let counts = ConfusionCounts::from_labels(&picked, &truth)?;
        let (precision, recall, f1) = precision_recall_f1(&counts);
        scores.push(RecordScore { run: rec.run, gen: rec.gen, task, counts, precision, recall, f1 });
    }
    Ok((scores, failures))
}

fn scores_csv(scores: &[RecordScore]) -> Result<Vec<u8>> {
    csv_bytes(|w| {
        w.write_record(["run", "gen", "task", "tp", "fp", "fn", "tn", "precision", "recall", "f1"])?;
        for s in scores {
            let c = &s.counts;
            w.write_record([
                s.run.to_string(),
                s.gen.to_string(),
                s.task.to_string(),
                c.tp.to_string(),
                c.fp.to_string(),
                c.fn_.to_string(),
                c.tn.to_string(),
                s.precision.to_string(),
                s.recall.to_string(),
                s.f1.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn run_cells(cfg: &ExperimentConfig, out: &OutputDir, jobs: usize) -> Result<()> {
    let mut groups = Vec::new();
    for &problem in &cfg.problems {
        for &dim in &cfg.dims {
            groups.push((problem, dim));
        }
    }
    let collect = collect_config(cfg);
    let datasets = par_cells(&groups, jobs, |&(problem, dim)| {
        if cfg.select_acc.dataset_dir.is_some() {
            return load_dataset(cfg, problem, dim);
        }
        let data = ga_collect_run(&BenchmarkProblem::new(problem, dim)?, &collect)?;
        let mut buf = Vec::new();
        write_dataset_csv(&data, &mut buf)?;
        out.write(&format!("datasets/{}", dataset_name(problem, dim)), &buf)?;
        Ok(data)
    })?;

    let seeds = cfg.seed_list();
    let mut cells = Vec::new();
    for arm in &cfg.arms {
        for (g, data) in groups.iter().zip(&datasets) {
            cells.push((arm, g.0, g.1, data));
        }
    }
    par_cells(&cells, jobs, |&(arm, problem, dim, data)| {
        let p = BenchmarkProblem::new(problem, dim)?;
        let mut cell = SelectCell { arm: arm.name.clone(), problem, dim, failures: 0, scores: Vec::new() };
        for rec in &data.records {
            let seed = seeds.get(rec.run).copied().unwrap_or(rec.run as u64);
            let (scores, failures) = score_record(arm, &p, seed, rec)?;
            cell.scores.extend(scores);
            cell.failures += failures;
        }
        let stem = format!("{}-{dim}", problem.as_str());
        out.write(&cell_path(&arm.name, &stem, "csv"), &scores_csv(&cell.scores)?)?;
        write_json(out, &cell_path(&arm.name, &stem, "json"), &cell)
    })?;
    Ok(())
}

type Metric = (&'static str, fn(&RecordScore) -> f64);

const METRICS: [Metric; 3] = [("precision", |s| s.precision), ("recall", |s| s.recall), ("f1", |s| s.f1)];

fn metric_rows(problem: &str, dim: usize, arm: &str, scores: &[&RecordScore]) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for task in [SurrogateTask::Reg, SurrogateTask::Cla] {
        for (name, get) in METRICS {
            let v: Vec<f64> = scores.iter().filter(|s| s.task == task).map(|s| get(s)).collect();
            rows.push(ResultRow {
                problem: problem.into(),
                dim,
                arm: arm.into(),
                metric: format!("{task}_{name}"),
                mean: mean(&v),
                std: sample_std(&v),
                rank: None,
                symbol: None,
            });
        }
    }
    rows
}

pub fn aggregate(cfg: &ExperimentConfig, out: &OutputDir) -> Result<ExperimentOutput> {
    let mut failures: BTreeMap<String, FailureTally> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut stage_rows: Vec<[String; 7]> = Vec::new();
    let mut pooled: Vec<(String, usize, Vec<RecordScore>)> = Vec::new();
    for arm in &cfg.arms {
        let tally = failures.entry(arm.name.clone()).or_default();
        for &dim in &cfg.dims {
            let mut all = Vec::new();
            for &problem in &cfg.problems {
                let cell: SelectCell =
                    read_json(out, &cell_path(&arm.name, &format!("{}-{dim}", problem.as_str()), "json"))?;
                tally.fallbacks += cell.failures;
                tally.cells += 1;
                let refs: Vec<&RecordScore> = cell.scores.iter().collect();
                rows.extend(metric_rows(problem.as_str(), dim, &arm.name, &refs));
                for task in [SurrogateTask::Reg, SurrogateTask::Cla] {
                    for &gen in &cfg.select_acc.generations {
                        let f1: Vec<f64> =
                            cell.scores.iter().filter(|s| s.task == task && s.gen == gen).map(|s| s.f1).collect();
                        stage_rows.push([
                            problem.as_str().into(),
                            dim.to_string(),
                            arm.name.clone(),
                            task.to_string(),
                            gen.to_string(),
                            mean(&f1).to_string(),
                            sample_std(&f1).to_string(),
                        ]);
                    }
                }
                all.extend(cell.scores);
            }
            let refs: Vec<&RecordScore> = all.iter().collect();
            rows.extend(metric_rows("all", dim, &arm.name, &refs));
            pooled.push((arm.name.clone(), dim, all));
        }
    }
    let table = ResultTable { rows };
    write_summary(out, &table)?;
    let stages = csv_bytes(|w| {
        w.write_record(["problem", "dim", "arm", "task", "gen", "f1_mean", "f1_std"])?;
        for r in &stage_rows {
            w.write_record(r)?;
        }
        Ok(())
    })?;
    out.write(STAGE_FILE, &stages)?;
    out.write(SELECTION_FILE, render_selection(&pooled).as_bytes())?;
    Ok(ExperimentOutput { table: Some(table), failures })
}

/// One row per (arm, dim): mean (std) of P, R and F1 for both tasks, pooled
/// over problems, stages and runs.
fn render_selection(pooled: &[(String, usize, Vec<RecordScore>)]) -> String {
    let mut grid = vec![vec!["arm".to_string(), "n".to_string()]];
    for task in [SurrogateTask::Reg, SurrogateTask::Cla] {
        for (name, _) in METRICS {
            grid[0].push(format!("{task} {name}"));
        }
    }
    for (arm, dim, scores) in pooled {
        let mut row = vec![arm.clone(), dim.to_string()];
        for task in [SurrogateTask::Reg, SurrogateTask::Cla] {
            for (_, get) in METRICS {
                let v: Vec<f64> = scores.iter().filter(|s| s.task == task).map(get).collect();
                row.push(format!("{:.2} ({:.2})", mean(&v), sample_std(&v)));
            }
        }
        grid.push(row);
    }
    render_grid(&grid)
}
