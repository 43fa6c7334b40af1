//! Real-coded GA: binary tournament, simulated binary crossover and
//! polynomial mutation, with offspring clipped to the box.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Solution;
use crate::problems::{DecisionVector, Objective};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaSettings {
    pub pop_size: usize,
    pub crossover_prob: f64,
    pub crossover_eta: f64,
    /// Per-variable mutation probability; `None` means `1 / n`.
    pub mutation_prob: Option<f64>,
    pub mutation_eta: f64,
}

impl Default for GaSettings {
    fn default() -> Self {
        Self { pop_size: 50, crossover_prob: 0.9, crossover_eta: 15.0, mutation_prob: None, mutation_eta: 20.0 }
    }
}

impl GaSettings {
    pub fn validate(&self) -> Result<()> {
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        if self.pop_size < 2 {
            return Err(Error::InvalidInput("GA population must hold at least 2 members".into()));
        }
        if !prob_ok(self.crossover_prob) || !self.mutation_prob.is_none_or(prob_ok) {
            return Err(Error::InvalidInput("GA probabilities must lie in [0, 1]".into()));
        }
        if !(self.crossover_eta >= 0.0 && self.mutation_eta >= 0.0) {
            return Err(Error::InvalidInput("distribution indices must be non-negative".into()));
        }
        Ok(())
    }
}

/// Binary tournament on objective value; ties keep the first draw.
pub fn tournament<'a, R: Rng + ?Sized>(pop: &'a [Solution], rng: &mut R) -> &'a Solution {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if b.f() < a.f() {
        b
    } else {
        a
    }
}

pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    eta: f64,
    rng: &mut R,
) -> (DecisionVector, DecisionVector) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    for i in 0..p1.len() {
        if rng.random_bool(0.5) {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        c1[i] = 0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]);
        c2[i] = 0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]);
    }
    (c1, c2)
}

pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    lower: &[f64],
    upper: &[f64],
    prob: f64,
    eta: f64,
    rng: &mut R,
) {
    for i in 0..x.len() {
        if !rng.random_bool(prob) {
            continue;
        }
        let (l, u) = (lower[i], upper[i]);
        let width = u - l;
        if width <= 0.0 {
            continue;
        }
        let v = x[i].clamp(l, u);
        let (d1, d2) = ((v - l) / width, (u - v) / width);
        let r: f64 = rng.random();
        let power = 1.0 / (eta + 1.0);
        let dq = if r < 0.5 {
            (2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1).powf(eta + 1.0)).powf(power) - 1.0
        } else {
            1.0 - (2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2).powf(eta + 1.0)).powf(power)
        };
        x[i] = v + dq * width;
    }
}

/// Produces `pop.len()` offspring from an evaluated population.
pub fn ga_step<R: Rng + ?Sized>(
    pop: &[Solution],
    bounds: &dyn Objective,
    cfg: &GaSettings,
    rng: &mut R,
) -> Result<Vec<DecisionVector>> {
    cfg.validate()?;
    if pop.len() < 2 {
        return Err(Error::InvalidInput("GA step needs at least 2 parents".into()));
    }
    if pop.iter().any(|s| !s.evaluated) {
        return Err(Error::InvalidInput("GA parents must be evaluated".into()));
    }
    let (lower, upper) = (bounds.lower(), bounds.upper());
    let pm = cfg.mutation_prob.unwrap_or(1.0 / bounds.dim().max(1) as f64);
    let mut offspring = Vec::with_capacity(pop.len() + 1);
    while offspring.len() < pop.len() {
        let a = &tournament(pop, rng).x;
        let b = &tournament(pop, rng).x;
        let (mut c1, mut c2) = if rng.random_bool(cfg.crossover_prob) {
            sbx_crossover(a, b, cfg.crossover_eta, rng)
        } else {
            (a.clone(), b.clone())
        };
        for c in [&mut c1, &mut c2] {
            polynomial_mutation(c, lower, upper, pm, cfg.mutation_eta, rng);
            for (v, (&l, &u)) in c.iter_mut().zip(lower.iter().zip(upper)) {
                *v = v.clamp(l, u);
            }
        }
        offspring.push(c1);
        offspring.push(c2);
    }
    offspring.truncate(pop.len());
    Ok(offspring)
}
