//! CoDE where each parent's three trials are narrowed to one before any
//! true evaluation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::result::{Archive, RunResult, TracePoint};
use crate::evolution::{code_generate_trials, Solution, CODE_MIN_POPULATION};
use crate::problems::{lhs_sample, Objective};
use crate::rng::seeded;
use crate::surrogate::{predict_batch, LabelRule, Predictor, SurrogateRequest, SurrogateTask};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreselectStrategy {
    /// Uniform pick; never consults the predictor.
    Random,
    /// Smallest predicted value.
    Reg,
    /// A trial labeled better, uniform among several; uniform when none is.
    Cla,
}

impl PreselectStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            PreselectStrategy::Random => "random",
            PreselectStrategy::Reg => "reg",
            PreselectStrategy::Cla => "cla",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreselectConfig {
    pub pop_size: usize,
    /// True evaluations, initial design included.
    pub budget: usize,
    pub label_ratio: f64,
    pub seed: u64,
}

impl Default for PreselectConfig {
    fn default() -> Self {
        Self { pop_size: 30, budget: 1000, label_ratio: 0.3, seed: 0 }
    }
}

impl PreselectConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < CODE_MIN_POPULATION {
            return Err(Error::InvalidInput(format!(
                "population size must be at least {CODE_MIN_POPULATION}, got {}",
                self.pop_size
            )));
        }
        if self.budget <= self.pop_size {
            return Err(Error::InvalidInput("budget must exceed the population size".into()));
        }
        if !(self.label_ratio > 0.0 && self.label_ratio < 1.0) {
            return Err(Error::InvalidInput("label ratio must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

pub fn code_preselect_run(
    cfg: &PreselectConfig,
    problem: &dyn Objective,
    predictor: &dyn Predictor,
    strategy: PreselectStrategy,
) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.pop_size;
    let mut rng = seeded(cfg.seed);
    let mut archive = Archive::new();
    let mut pop: Vec<Solution> = Vec::with_capacity(n);
    for x in lhs_sample(n, problem, &mut rng)? {
        let f = problem.evaluate(&x)?;
        let s = Solution::evaluated(x, f)?;
        archive.push(s.clone())?;
        pop.push(s);
    }
    let mut fes = n;
    let mut best_f = archive.best().map_or(f64::INFINITY, Solution::f);
    let mut trace = vec![TracePoint { gen: 0, fes, best_f, unevaluated: 0 }];
    let (mut failures, mut predict_calls) = (0, 0);
    let mut stopped: Option<Error> = None;

    let mut gen = 0;
    while fes < cfg.budget {
        gen += 1;
        let xs: Vec<Vec<f64>> = pop.iter().map(|s| s.x.clone()).collect();
        let fs: Vec<f64> = pop.iter().map(Solution::f).collect();
        let mut trials = Vec::with_capacity(3 * n);
        for i in 0..n {
            trials.extend(code_generate_trials(i, &xs, problem, &mut rng)?);
        }

        let choice: Vec<usize> = match strategy {
            PreselectStrategy::Random => (0..n).map(|_| rng.random_range(0..3)).collect(),
            PreselectStrategy::Reg | PreselectStrategy::Cla => {
                let task = if strategy == PreselectStrategy::Reg { SurrogateTask::Reg } else { SurrogateTask::Cla };
                let req = SurrogateRequest {
                    task,
                    train_x: &xs,
                    train_f: &fs,
                    rule: LabelRule::TopK(cfg.label_ratio),
                    queries: &trials,
                };
                predict_calls += 1;
                let out = match predict_batch(predictor, &req) {
                    Ok(out) => out,
                    Err(e) => {
                        stopped = Some(e);
                        break;
                    }
                };
                failures += out.failures;
                if task == SurrogateTask::Reg {
                    let v = out.values();
                    (0..n).map(|i| super::assisted_select_value(&v[3 * i..3 * i + 3])).collect::<Result<_>>()?
                } else {
                    let l = out.labels();
                    (0..n)
                        .map(|i| {
                            let positives: Vec<usize> = (0..3).filter(|&k| l[3 * i + k]).collect();
                            if positives.is_empty() {
                                rng.random_range(0..3)
                            } else {
                                positives[rng.random_range(0..positives.len())]
                            }
                        })
                        .collect()
                }
            }
        };

        for (i, &k) in choice.iter().enumerate() {
            if fes >= cfg.budget {
                break;
            }
            let x = trials[3 * i + k].clone();
            let f = problem.evaluate(&x)?;
            let s = Solution::evaluated(x, f)?;
            archive.push(s.clone())?;
            fes += 1;
            best_f = best_f.min(f);
            if f <= pop[i].f() {
                pop[i] = s;
            }
        }
        trace.push(TracePoint { gen, fes, best_f, unevaluated: 0 });
    }

    let mut echo = serde_json::to_value(cfg).map_err(|e| Error::InvalidState(e.to_string()))?;
    echo["strategy"] = serde_json::Value::from(strategy.as_str());
    let mut result = RunResult::from_archive(archive, cfg.seed, cfg.budget, echo)?;
    result.trace = trace;
    result.failures = failures;
    result.predict_calls = predict_calls;
    result.init_evaluations = n;
    if let Some(e) = stopped {
        result.stop_on(e)?;
    }
    Ok(result)
}
