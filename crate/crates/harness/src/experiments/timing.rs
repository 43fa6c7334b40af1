//! Inference cost: prompt sizes and wall time of one batch of queries, sent
//! once with a single call in flight and once with many.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{Context, Result};
use laea_core::backends::{CallOutcome, CallRecord};
use laea_core::problems::{lhs_sample, BenchmarkProblem, Objective, ProblemName};
use laea_core::rng::{derive, seeded};
use laea_core::stats::mean;
use laea_core::surrogate::{predict_batch, LabelRule, SurrogateRequest, SurrogateTask, DEFAULT_VALUE_PRECISION};
use serde::{Deserialize, Serialize};

use super::{cell_path, csv_bytes, read_json, write_json, ExperimentOutput};
use crate::config::{ArmSpec, ExperimentConfig};
use crate::manifest::FailureTally;
use crate::output::OutputDir;
use crate::predictors::build;

pub const CALLS_FILE: &str = "calls.csv";
pub const TIMING_FILE: &str = "timing.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Serial,
    Parallel,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Serial => "serial",
            Mode::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingCell {
    pub arm: String,
    pub problem: ProblemName,
    pub dim: usize,
    pub beta: u32,
    pub task: SurrogateTask,
    pub mode: Mode,
    pub wall_s: f64,
    pub failures: usize,
    pub records: Vec<CallRecord>,
}

const TASKS: [SurrogateTask; 2] = [SurrogateTask::Reg, SurrogateTask::Cla];
const MODES: [Mode; 2] = [Mode::Serial, Mode::Parallel];

fn stem(problem: ProblemName, dim: usize, beta: u32, task: SurrogateTask, mode: Mode) -> String {
    format!("{}-{dim}-beta{beta}-{task}-{}", problem.as_str(), mode.as_str())
}

/// Times one batch. Feature decimals follow `beta`; values keep the
/// default precision.
pub fn time_batch(
    arm: &ArmSpec,
    problem: &BenchmarkProblem,
    seed: u64,
    beta: u32,
    task: SurrogateTask,
    parallelism: usize,
    sizes: (usize, usize),
) -> Result<(f64, usize, Vec<CallRecord>)> {
    let mut rng = seeded(derive(seed, problem.dim() as u64));
    let train_x = lhs_sample(sizes.0, problem, &mut rng)?;
    let train_f = train_x.iter().map(|x| problem.evaluate(x)).collect::<laea_core::Result<Vec<f64>>>()?;
    let queries = lhs_sample(sizes.1, problem, &mut rng)?;

    let built = build(&arm.predictor, problem, seed, Some((beta, DEFAULT_VALUE_PRECISION)), Some(parallelism))?;
    let client = built.client.context("timing needs a prompt-based predictor")?;
    let req =
        SurrogateRequest { task, train_x: &train_x, train_f: &train_f, rule: LabelRule::Median, queries: &queries };
    let start = Instant::now();
    let outcome = predict_batch(built.predictor.as_ref(), &req)?;
    let wall = start.elapsed().as_secs_f64();
    Ok((wall, outcome.failures, client.log().drain()))
}

/// Batches run one after another so wall times are not skewed by each other.
pub fn run_cells(cfg: &ExperimentConfig, out: &OutputDir) -> Result<()> {
    let t = &cfg.timing;
    let seed = cfg.seed_list()[0];
    for arm in &cfg.arms {
        for &problem in &cfg.problems {
            for &dim in &t.dims {
                let p = BenchmarkProblem::new(problem, dim)?;
                for &beta in &t.precisions {
                    for task in TASKS {
                        for mode in MODES {
                            let k = if mode == Mode::Serial { 1 } else { t.parallelism };
                            let (wall_s, failures, records) =
                                time_batch(arm, &p, seed, beta, task, k, (t.train_size, t.test_size))?;
                            let cell = TimingCell {
                                arm: arm.name.clone(),
                                problem,
                                dim,
                                beta,
                                task,
                                mode,
                                wall_s,
                                failures,
                                records,
                            };
                            write_json(
                                out,
                                &cell_path(&arm.name, &stem(problem, dim, beta, task, mode), "json"),
                                &cell,
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn aggregate(cfg: &ExperimentConfig, out: &OutputDir) -> Result<ExperimentOutput> {
    let t = &cfg.timing;
    let mut failures: BTreeMap<String, FailureTally> = BTreeMap::new();
    let mut calls: Vec<[String; 9]> = Vec::new();
    let mut rows: Vec<[String; 11]> = Vec::new();
    for arm in &cfg.arms {
        let tally = failures.entry(arm.name.clone()).or_default();
        for &problem in &cfg.problems {
            for &dim in &t.dims {
                for &beta in &t.precisions {
                    for task in TASKS {
                        let mut wall = [0.0; 2];
                        let mut serial: Vec<CallRecord> = Vec::new();
                        let mut bad = 0;
                        for (m, mode) in MODES.into_iter().enumerate() {
                            let cell: TimingCell =
                                read_json(out, &cell_path(&arm.name, &stem(problem, dim, beta, task, mode), "json"))?;
                            tally.fallbacks += cell.failures;
                            tally.cells += 1;
                            wall[m] = cell.wall_s;
                            bad += cell.records.iter().filter(|r| r.outcome != CallOutcome::Ok).count();
                            for r in &cell.records {
                                calls.push([
                                    arm.name.clone(),
                                    mode.as_str().into(),
                                    beta.to_string(),
                                    r.task.to_string(),
                                    r.dim.to_string(),
                                    r.chars.to_string(),
                                    r.approx_tokens.to_string(),
                                    format!("{:.6}", r.latency_s),
                                    r.outcome.as_str().into(),
                                ]);
                            }
                            if mode == Mode::Serial {
                                serial = cell.records;
                            }
                        }
                        let chars: Vec<f64> = serial.iter().map(|r| r.chars as f64).collect();
                        let tokens: Vec<f64> = serial.iter().map(|r| r.approx_tokens as f64).collect();
                        rows.push([
                            arm.name.clone(),
                            problem.as_str().into(),
                            task.to_string(),
                            dim.to_string(),
                            beta.to_string(),
                            serial.len().to_string(),
                            mean(&chars).to_string(),
                            mean(&tokens).to_string(),
                            format!("{:.6}", wall[0]),
                            format!("{:.6}", wall[1]),
                            bad.to_string(),
                        ]);
                    }
                }
            }
        }
    }
    let calls_csv = csv_bytes(|w| {
        w.write_record(["arm", "mode", "beta", "task", "dim", "chars", "approx_tokens", "latency_s", "outcome"])?;
        for r in &calls {
            w.write_record(r)?;
        }
        Ok(())
    })?;
    out.write(CALLS_FILE, &calls_csv)?;
    let timing_csv = csv_bytes(|w| {
        w.write_record([
            "arm",
            "problem",
            "task",
            "dim",
            "beta",
            "calls",
            "chars_mean",
            "approx_tokens_mean",
            "serial_total_s",
            "parallel_total_s",
            "failed_calls",
        ])?;
        for r in &rows {
            w.write_record(r)?;
        }
        Ok(())
    })?;
    out.write(TIMING_FILE, &timing_csv)?;
    Ok(ExperimentOutput { table: None, failures })
}
