//! Composite DE trial generation: three strategies, each paired with a
//! randomly drawn (F, CR) setting from a fixed pool.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::problems::{DecisionVector, Objective};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeStrategy {
    Rand1Bin,
    Rand2Bin,
    CurrentToRand1,
}

impl DeStrategy {
    pub const ALL: [DeStrategy; 3] = [DeStrategy::Rand1Bin, DeStrategy::Rand2Bin, DeStrategy::CurrentToRand1];

    fn donors(self) -> usize {
        match self {
            DeStrategy::Rand1Bin | DeStrategy::CurrentToRand1 => 3,
            DeStrategy::Rand2Bin => 5,
        }
    }
}

/// (F, CR) settings.
pub const CODE_PARAMETER_POOL: [(f64, f64); 3] = [(1.0, 0.1), (1.0, 0.9), (0.8, 0.2)];

/// rand/2 needs five donors distinct from the parent.
pub const CODE_MIN_POPULATION: usize = 6;

/// Reflects an out-of-box coordinate back inside, then clips whatever is
/// still outside after one reflection.
pub fn repair_reflect(v: f64, lower: f64, upper: f64) -> f64 {
    let r = if v < lower {
        2.0 * lower - v
    } else if v > upper {
        2.0 * upper - v
    } else {
        v
    };
    r.clamp(lower, upper)
}

fn donors<R: Rng + ?Sized>(parent: usize, n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, n - 1, k).into_iter().map(|i| if i >= parent { i + 1 } else { i }).collect()
}

fn binomial<R: Rng + ?Sized>(target: &[f64], mutant: &[f64], cr: f64, rng: &mut R) -> DecisionVector {
    let jrand = rng.random_range(0..target.len());
    target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (&t, &m))| if j == jrand || rng.random_bool(cr) { m } else { t })
        .collect()
}

fn trial<R: Rng + ?Sized>(
    strategy: DeStrategy,
    i: usize,
    pop: &[DecisionVector],
    f: f64,
    cr: f64,
    rng: &mut R,
) -> DecisionVector {
    let x = &pop[i];
    let r = donors(i, pop.len(), strategy.donors(), rng);
    let diff = |a: usize, b: usize, j: usize| pop[a][j] - pop[b][j];
    match strategy {
        DeStrategy::Rand1Bin => {
            let v: Vec<f64> = (0..x.len()).map(|j| pop[r[0]][j] + f * diff(r[1], r[2], j)).collect();
            binomial(x, &v, cr, rng)
        }
        DeStrategy::Rand2Bin => {
            let v: Vec<f64> =
                (0..x.len()).map(|j| pop[r[0]][j] + f * diff(r[1], r[2], j) + f * diff(r[3], r[4], j)).collect();
            binomial(x, &v, cr, rng)
        }
        DeStrategy::CurrentToRand1 => {
            let k: f64 = rng.random();
            (0..x.len()).map(|j| x[j] + k * (pop[r[0]][j] - x[j]) + f * diff(r[1], r[2], j)).collect()
        }
    }
}

/// Three trials for `parent`, one per strategy in [`DeStrategy::ALL`] order,
/// repaired into the box.
pub fn code_generate_trials<R: Rng + ?Sized>(
    parent: usize,
    pop: &[DecisionVector],
    bounds: &dyn Objective,
    rng: &mut R,
) -> Result<[DecisionVector; 3]> {
    if pop.len() < CODE_MIN_POPULATION {
        return Err(Error::InvalidInput(format!(
            "CoDE needs a population of at least {CODE_MIN_POPULATION}, got {}",
            pop.len()
        )));
    }
    if parent >= pop.len() {
        return Err(Error::InvalidInput(format!("parent index {parent} out of range")));
    }
    let (lower, upper) = (bounds.lower(), bounds.upper());
    Ok(DeStrategy::ALL.map(|s| {
        let (f, cr) = CODE_PARAMETER_POOL[rng.random_range(0..CODE_PARAMETER_POOL.len())];
        let mut t = trial(s, parent, pop, f, cr, rng);
        for (v, (&l, &u)) in t.iter_mut().zip(lower.iter().zip(upper)) {
            *v = repair_reflect(*v, l, u);
        }
        t
    }))
}
