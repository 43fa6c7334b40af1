//! Two-dimensional case study: train on a Latin hypercube design, then
//! label every point of a regular grid as better or worse than the
//! training median, once by direct classification and once by regression.

use std::collections::BTreeMap;

use anyhow::Result;
use laea_core::problems::{grid_sample, lhs_sample, BenchmarkProblem, Objective, ProblemName};
use laea_core::rng::seeded;
use laea_core::stats::{accuracy, mean, sample_std};
use laea_core::surrogate::{assign_labels_topk, median, predict_batch, LabelRule, SurrogateRequest, SurrogateTask};
use serde::{Deserialize, Serialize};

use super::{cell_path, csv_bytes, read_json, run_cells as par_cells, write_json, write_summary, ExperimentOutput};
use crate::config::{ArmSpec, ExperimentConfig, RegLabeling};
use crate::manifest::FailureTally;
use crate::output::OutputDir;
use crate::predictors::build;
use crate::table::{ResultRow, ResultTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case2dCell {
    pub arm: String,
    pub problem: ProblemName,
    pub seed: u64,
    pub acc_cla: f64,
    pub acc_reg: f64,
    pub failures: usize,
}

/// Grid points with truth and both predicted labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Case2dPoints {
    pub grid: Vec<Vec<f64>>,
    pub truth: Vec<bool>,
    pub cla: Vec<bool>,
    pub reg: Vec<bool>,
    pub failures: usize,
}

pub fn score(
    arm: &ArmSpec,
    problem: ProblemName,
    seed: u64,
    train_size: usize,
    grid_points: usize,
    labeling: RegLabeling,
) -> Result<Case2dPoints> {
    let p = BenchmarkProblem::new(problem, 2)?;
    let mut rng = seeded(seed);
    let train_x = lhs_sample(train_size, &p, &mut rng)?;
    let train_f = train_x.iter().map(|x| p.evaluate(x)).collect::<laea_core::Result<Vec<f64>>>()?;
    let grid = grid_sample(grid_points, &p)?;
    let threshold = median(&train_f);
    let truth = grid.iter().map(|x| Ok(p.evaluate(x)? < threshold)).collect::<laea_core::Result<Vec<bool>>>()?;

    let built = build(&arm.predictor, &p, seed, None, None)?;
    let request =
        |task| SurrogateRequest { task, train_x: &train_x, train_f: &train_f, rule: LabelRule::Median, queries: &grid };
    let cla_out = predict_batch(built.predictor.as_ref(), &request(SurrogateTask::Cla))?;
    let reg_out = predict_batch(built.predictor.as_ref(), &request(SurrogateTask::Reg))?;
    let values = reg_out.values();
    let reg = match labeling {
        RegLabeling::Threshold => values.iter().map(|&v| v < threshold).collect(),
        RegLabeling::RankHalf => assign_labels_topk(&values, 0.5),
    };
    Ok(Case2dPoints { grid, truth, cla: cla_out.labels(), reg, failures: cla_out.failures + reg_out.failures })
}

fn stem(problem: ProblemName, seed: u64) -> String {
    format!("{}-seed{seed}", problem.as_str())
}

fn points_csv(problem: ProblemName, pts: &Case2dPoints) -> Result<Vec<u8>> {
    let b = |v: bool| if v { "1" } else { "0" };
    csv_bytes(|w| {
        w.write_record(["problem", "x1", "x2", "true_label", "pred_label_cla", "pred_label_reg"])?;
        for (i, x) in pts.grid.iter().enumerate() {
            w.write_record([
                problem.as_str(),
                &x[0].to_string(),
                &x[1].to_string(),
                b(pts.truth[i]),
                b(pts.cla[i]),
                b(pts.reg[i]),
            ])?;
        }
        Ok(())
    })
}

pub fn run_cells(cfg: &ExperimentConfig, out: &OutputDir, jobs: usize) -> Result<()> {
    let mut cells = Vec::new();
    for arm in &cfg.arms {
        for &problem in &cfg.problems {
            for seed in cfg.seed_list() {
                cells.push((arm, problem, seed));
            }
        }
    }
    let s = &cfg.case2d;
    par_cells(&cells, jobs, |&(arm, problem, seed)| {
        let pts = score(arm, problem, seed, s.train_size, s.grid_points, s.reg_labeling)?;
        out.write(&cell_path(&arm.name, &stem(problem, seed), "csv"), &points_csv(problem, &pts)?)?;
        let cell = Case2dCell {
            arm: arm.name.clone(),
            problem,
            seed,
            acc_cla: accuracy(&pts.cla, &pts.truth)?,
            acc_reg: accuracy(&pts.reg, &pts.truth)?,
            failures: pts.failures,
        };
        write_json(out, &cell_path(&arm.name, &stem(problem, seed), "json"), &cell)
    })?;
    Ok(())
}

pub fn aggregate(cfg: &ExperimentConfig, out: &OutputDir) -> Result<ExperimentOutput> {
    let mut rows = Vec::new();
    let mut failures = BTreeMap::new();
    for arm in &cfg.arms {
        let tally: &mut FailureTally = failures.entry(arm.name.clone()).or_default();
        for &problem in &cfg.problems {
            let mut cla = Vec::new();
            let mut reg = Vec::new();
            for seed in cfg.seed_list() {
                let cell: Case2dCell = read_json(out, &cell_path(&arm.name, &stem(problem, seed), "json"))?;
                cla.push(cell.acc_cla);
                reg.push(cell.acc_reg);
                tally.fallbacks += cell.failures;
                tally.cells += 1;
            }
            for (metric, v) in [("acc_cla", &cla), ("acc_reg", &reg)] {
                rows.push(ResultRow {
                    problem: problem.as_str().into(),
                    dim: 2,
                    arm: arm.name.clone(),
                    metric: metric.into(),
                    mean: mean(v),
                    std: sample_std(v),
                    rank: None,
                    symbol: None,
                });
            }
        }
    }
    let table = ResultTable { rows };
    write_summary(out, &table)?;
    Ok(ExperimentOutput { table: Some(table), failures })
}
