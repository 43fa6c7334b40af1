//! Predictors that answer from the true objective instead of a model.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::problems::{evaluate, BenchmarkProblem};
use crate::rng::{derive, digest_points, seeded};
use crate::surrogate::{BatchOutcome, Prediction, Predictor, SurrogateRequest, SurrogateTask};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum OracleMode {
    /// Exact values and ground-truth labels.
    Perfect,
    /// True value plus Gaussian noise with standard deviation
    /// `sigma * (max - min)` of the training values.
    Noisy { sigma: f64 },
    /// Uniform values in the training range, fair-coin labels.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSpec {
    #[serde(flatten)]
    pub mode: OracleMode,
    #[serde(default)]
    pub seed: u64,
}

impl OracleSpec {
    pub fn perfect() -> Self {
        Self { mode: OracleMode::Perfect, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            OracleMode::Noisy { sigma } if !(sigma.is_finite() && sigma >= 0.0) => {
                Err(Error::InvalidInput(format!("noise sigma must be non-negative, got {sigma}")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self.mode {
            OracleMode::Perfect => "oracle-perfect".into(),
            OracleMode::Noisy { sigma } => format!("oracle-noisy-{sigma}"),
            OracleMode::Random => "oracle-random".into(),
        }
    }
}

fn task_tag(task: SurrogateTask) -> u64 {
    match task {
        SurrogateTask::Reg => 0x5245_4700,
        SurrogateTask::Cla => 0x434c_4100,
    }
}

/// Answers `req` from `problem`. Noise and random draws depend only on the
/// seed, the task and the query points, so repeated calls agree.
pub fn oracle_predict(
    spec: &OracleSpec,
    problem: &BenchmarkProblem,
    req: &SurrogateRequest<'_>,
) -> Result<BatchOutcome> {
    spec.validate()?;
    req.validate()?;
    let mut rng = seeded(derive(spec.seed, digest_points(req.queries) ^ task_tag(req.task)));
    let (lo, hi) = req.train_f.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| (a.min(y), b.max(y)));

    let truth = || req.queries.iter().map(|u| evaluate(problem, u)).collect::<Result<Vec<f64>>>();
    let values: Vec<f64> = match spec.mode {
        OracleMode::Perfect => truth()?,
        OracleMode::Noisy { sigma } => {
            let sd = sigma * (hi - lo);
            let mut v = truth()?;
            if sd > 0.0 {
                let noise = Normal::new(0.0, sd).map_err(|e| Error::InvalidInput(e.to_string()))?;
                for y in &mut v {
                    *y += noise.sample(&mut rng);
                }
            }
            v
        }
        OracleMode::Random => {
            let predictions = match req.task {
                SurrogateTask::Reg => req
                    .queries
                    .iter()
                    .map(|_| Prediction::Value(if hi > lo { rng.random_range(lo..=hi) } else { lo }))
                    .collect(),
                SurrogateTask::Cla => req.queries.iter().map(|_| Prediction::Label(rng.random_bool(0.5))).collect(),
            };
            return Ok(BatchOutcome { predictions, failures: 0 });
        }
    };

    let predictions = match req.task {
        SurrogateTask::Reg => values.into_iter().map(Prediction::Value).collect(),
        SurrogateTask::Cla => req.rule.query_labels(req.train_f, &values).into_iter().map(Prediction::Label).collect(),
    };
    Ok(BatchOutcome { predictions, failures: 0 })
}

#[derive(Debug, Clone)]
pub struct OraclePredictor {
    spec: OracleSpec,
    problem: BenchmarkProblem,
}

impl OraclePredictor {
    pub fn new(spec: OracleSpec, problem: BenchmarkProblem) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec, problem })
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }
}

impl Predictor for OraclePredictor {
    fn predict(&self, request: &SurrogateRequest<'_>) -> Result<BatchOutcome> {
        oracle_predict(&self.spec, &self.problem, request)
    }

    fn describe(&self) -> String {
        self.spec.name()
    }
}
