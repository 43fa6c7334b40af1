//! LAEA: histogram reproduction steered by a surrogate that picks one
//! candidate per generation for true evaluation and endorses others as
//! unevaluated parents for the next generation.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::result::{Archive, RunResult, TracePoint};
use crate::evolution::{vwh_fit, vwh_sample, Population, Solution, DEFAULT_BINS};
use crate::problems::{lhs_sample, Objective};
use crate::rng::seeded;
use crate::surrogate::{ascending_order, predict_batch, LabelRule, Predictor, SurrogateRequest, SurrogateTask};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Regression picks the evaluated candidate, classification picks the
    /// unevaluated set.
    RegCla,
    /// Regression does both.
    RegOnly,
}

/// Which archive members form the surrogate's context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowPolicy {
    /// The `window` members with the lowest objective.
    #[default]
    Best,
    /// The `window` most recently evaluated members.
    Recent,
    /// The first `window` members ever evaluated.
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LaeaConfig {
    pub pop_size: usize,
    pub window: usize,
    /// True evaluations, initial design included.
    pub budget: usize,
    pub variant: Variant,
    pub label_ratio: f64,
    pub bins: usize,
    pub window_policy: WindowPolicy,
    pub seed: u64,
}

impl Default for LaeaConfig {
    fn default() -> Self {
        Self {
            pop_size: 50,
            window: 50,
            budget: 300,
            variant: Variant::RegCla,
            label_ratio: 0.3,
            bins: DEFAULT_BINS,
            window_policy: WindowPolicy::Best,
            seed: 0,
        }
    }
}

impl LaeaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 {
            return Err(Error::InvalidInput(format!("population size must be at least 4, got {}", self.pop_size)));
        }
        if self.window < 2 {
            return Err(Error::InvalidInput(format!("window must be at least 2, got {}", self.window)));
        }
        if self.budget <= self.pop_size {
            return Err(Error::InvalidInput(format!(
                "budget {} must exceed the population size {}",
                self.budget, self.pop_size
            )));
        }
        if !(self.label_ratio > 0.0 && self.label_ratio < 1.0) {
            return Err(Error::InvalidInput(format!("label ratio must lie in (0, 1), got {}", self.label_ratio)));
        }
        if self.bins < 3 {
            return Err(Error::InvalidInput("histogram needs at least 3 bins".into()));
        }
        Ok(())
    }
}

/// Index of the smallest predicted value; ties go to the lowest index and
/// NaN never wins.
pub fn assisted_select_value(values: &[f64]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::InvalidInput("no candidates to select from".into()));
    }
    let key = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    Ok((1..values.len()).fold(0, |best, i| if key(values[i]) < key(values[best]) { i } else { best }))
}

/// Indices of positively labeled candidates, reduced to a seeded random
/// subset of `cap` when there are more. Returned in ascending order.
pub fn assisted_select_label<R: Rng + ?Sized>(labels: &[bool], cap: usize, rng: &mut R) -> Vec<usize> {
    let positives: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    if positives.len() <= cap {
        return positives;
    }
    let mut picked: Vec<usize> = sample(rng, positives.len(), cap).into_iter().map(|k| positives[k]).collect();
    picked.sort_unstable();
    picked
}

fn window(archive: &Archive, policy: WindowPolicy, size: usize) -> Vec<&Solution> {
    let entries = archive.entries();
    let take = size.min(entries.len());
    match policy {
        WindowPolicy::Best => {
            let f: Vec<f64> = entries.iter().map(Solution::f).collect();
            ascending_order(&f).into_iter().take(take).map(|i| &entries[i]).collect()
        }
        WindowPolicy::Recent => entries[entries.len() - take..].iter().collect(),
        WindowPolicy::First => entries[..take].iter().collect(),
    }
}

pub fn laea_run(cfg: &LaeaConfig, problem: &dyn Objective, predictor: &dyn Predictor) -> Result<RunResult> {
    cfg.validate()?;
    let n = cfg.pop_size;
    let mut rng = seeded(cfg.seed);
    let mut archive = Archive::new();
    let mut pop = Population::new(n);
    for x in lhs_sample(n, problem, &mut rng)? {
        let f = problem.evaluate(&x)?;
        let s = Solution::evaluated(x, f)?;
        archive.push(s.clone())?;
        pop.members.push(s);
    }
    let mut fes = n;
    let mut unevaluated: Vec<Solution> = Vec::new();
    let mut best_f = archive.best().map_or(f64::INFINITY, Solution::f);
    let mut trace = vec![TracePoint { gen: 0, fes, best_f, unevaluated: 0 }];
    let mut failures = 0;
    let mut predict_calls = 0;
    let mut stopped: Option<Error> = None;
    let rule = LabelRule::TopK(cfg.label_ratio);
    let cap = n / 2;

    let mut gen = 0;
    while fes < cfg.budget {
        gen += 1;
        let parents: Vec<Solution> = pop.members.iter().chain(&unevaluated).cloned().collect();
        let model = vwh_fit(&parents, problem, cfg.bins)?;
        let candidates = vwh_sample(&model, n, &mut rng)?;

        let context = window(&archive, cfg.window_policy, cfg.window);
        let train_x: Vec<Vec<f64>> = context.iter().map(|s| s.x.clone()).collect();
        let train_f: Vec<f64> = context.iter().map(|s| s.f()).collect();
        let request =
            |task| SurrogateRequest { task, train_x: &train_x, train_f: &train_f, rule, queries: &candidates };

        predict_calls += 1;
        let values = match predict_batch(predictor, &request(SurrogateTask::Reg)) {
            Ok(out) => {
                failures += out.failures;
                out.values()
            }
            Err(e) => {
                stopped = Some(e);
                break;
            }
        };
        let q = assisted_select_value(&values)?;

        let endorsed: Vec<usize> = match cfg.variant {
            Variant::RegCla => {
                predict_calls += 1;
                let mut labels = match predict_batch(predictor, &request(SurrogateTask::Cla)) {
                    Ok(out) => {
                        failures += out.failures;
                        out.labels()
                    }
                    Err(e) => {
                        stopped = Some(e);
                        break;
                    }
                };
                labels[q] = false;
                assisted_select_label(&labels, cap, &mut rng)
            }
            Variant::RegOnly => ascending_order(&values).into_iter().filter(|&i| i != q).take(cap).collect(),
        };
        unevaluated = endorsed.into_iter().map(|i| Solution::unevaluated(candidates[i].clone())).collect();

        let x = candidates[q].clone();
        let f = problem.evaluate(&x)?;
        let s = Solution::evaluated(x, f)?;
        archive.push(s.clone())?;
        pop.members.push(s);
        pop.truncate_best();
        fes += 1;
        best_f = best_f.min(f);
        trace.push(TracePoint { gen, fes, best_f, unevaluated: unevaluated.len() });
    }

    let config = serde_json::to_value(cfg).map_err(|e| Error::InvalidState(e.to_string()))?;
    let mut result = RunResult::from_archive(archive, cfg.seed, cfg.budget, config)?;
    result.trace = trace;
    result.failures = failures;
    result.predict_calls = predict_calls;
    result.init_evaluations = n;
    if let Some(e) = stopped {
        result.stop_on(e)?;
    }
    Ok(result)
}
