//! Variable-width histogram: a per-dimension marginal model with `M - 2`
//! equal bins over the population's range and two boundary bins reaching
//! out to the box bounds.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Solution;
use crate::problems::{DecisionVector, Objective};
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 15;
/// Mass given to each boundary bin on top of its member count.
pub const BOUNDARY_PSEUDO_COUNT: f64 = 0.1;

const DEGENERATE_WIDEN: f64 = 1e-6;
const EDGE_NUDGE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VwhModel {
    /// `edges[d]` has `M + 1` strictly increasing entries from lower to upper bound.
    pub edges: Vec<Vec<f64>>,
    /// `probs[d]` has `M` entries summing to one.
    pub probs: Vec<Vec<f64>>,
}

impl VwhModel {
    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn bins(&self) -> usize {
        self.probs.first().map_or(0, Vec::len)
    }

    /// Index of the bin containing `v` in dimension `d`.
    pub fn bin_of(&self, d: usize, v: f64) -> usize {
        let e = &self.edges[d];
        let m = e.len() - 1;
        e[1..m].partition_point(|&edge| edge <= v)
    }
}

fn interior_range(values: impl Iterator<Item = f64>, lower: f64, upper: f64) -> (f64, f64) {
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    lo = lo.clamp(lower, upper);
    hi = hi.clamp(lower, upper);
    let range = upper - lower;
    if hi - lo <= 0.0 {
        lo = (lo - DEGENERATE_WIDEN * range).max(lower);
        hi = (hi + DEGENERATE_WIDEN * range).min(upper);
    }
    // Boundary bins need positive width too.
    lo = lo.max(lower + EDGE_NUDGE * range);
    hi = hi.min(upper - EDGE_NUDGE * range);
    (lo, hi)
}

/// Fits the histogram to `pop` within the box of `bounds`.
pub fn vwh_fit(pop: &[Solution], bounds: &dyn Objective, bins: usize) -> Result<VwhModel> {
    if pop.len() < 2 {
        return Err(Error::InvalidInput(format!("histogram needs at least 2 members, got {}", pop.len())));
    }
    if bins < 3 {
        return Err(Error::InvalidInput(format!("histogram needs at least 3 bins, got {bins}")));
    }
    let dim = bounds.dim();
    if pop.iter().any(|s| s.x.len() != dim) {
        return Err(Error::InvalidInput("member dimension does not match the problem".into()));
    }
    let interior = bins - 2;
    let total = pop.len() as f64 + 2.0 * BOUNDARY_PSEUDO_COUNT;
    let mut edges = Vec::with_capacity(dim);
    let mut probs = Vec::with_capacity(dim);
    for d in 0..dim {
        let (lower, upper) = (bounds.lower()[d], bounds.upper()[d]);
        let (lo, hi) = interior_range(pop.iter().map(|s| s.x[d]), lower, upper);
        let width = (hi - lo) / interior as f64;

        let mut e = Vec::with_capacity(bins + 1);
        e.push(lower);
        e.extend((0..interior).map(|k| lo + k as f64 * width));
        e.push(hi);
        e.push(upper);
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidState(format!("histogram edges collapse in dimension {d}")));
        }

        let mut counts = vec![0.0; bins];
        counts[0] = BOUNDARY_PSEUDO_COUNT;
        counts[bins - 1] = BOUNDARY_PSEUDO_COUNT;
        for s in pop {
            let k = (((s.x[d] - lo) / width).floor().max(0.0) as usize).min(interior - 1);
            counts[k + 1] += 1.0;
        }
        edges.push(e);
        probs.push(counts.into_iter().map(|c| c / total).collect());
    }
    Ok(VwhModel { edges, probs })
}

/// Draws `count` points: per dimension, a bin by its probability, then a
/// uniform coordinate inside it.
pub fn vwh_sample<R: Rng + ?Sized>(model: &VwhModel, count: usize, rng: &mut R) -> Result<Vec<DecisionVector>> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let pickers = model
        .probs
        .iter()
        .map(|p| WeightedIndex::new(p).map_err(|e| Error::InvalidState(format!("bad bin weights: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![vec![0.0; model.dim()]; count];
    for point in &mut out {
        for (d, picker) in pickers.iter().enumerate() {
            let k = picker.sample(rng);
            let (a, b) = (model.edges[d][k], model.edges[d][k + 1]);
            point[d] = rng.random_range(a..b);
        }
    }
    Ok(out)
}
