//! Benchmark objectives and the sampling designs shared by every experiment.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in the decision space.
pub type DecisionVector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemName {
    Ellipsoid,
    Rosenbrock,
    Ackley,
    Griewank,
}

impl ProblemName {
    pub const ALL: [ProblemName; 4] =
        [ProblemName::Ellipsoid, ProblemName::Rosenbrock, ProblemName::Ackley, ProblemName::Griewank];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemName::Ellipsoid => "ellipsoid",
            ProblemName::Rosenbrock => "rosenbrock",
            ProblemName::Ackley => "ackley",
            ProblemName::Griewank => "griewank",
        }
    }

    /// Symmetric box half-width used for this function.
    pub fn half_width(self) -> f64 {
        match self {
            ProblemName::Ellipsoid => 5.12,
            ProblemName::Rosenbrock => 2.048,
            ProblemName::Ackley => 32.768,
            ProblemName::Griewank => 600.0,
        }
    }

    /// Location of the global minimum in `dim` dimensions.
    pub fn optimum(self, dim: usize) -> DecisionVector {
        match self {
            ProblemName::Rosenbrock => vec![1.0; dim],
            _ => vec![0.0; dim],
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ellipsoid" => Ok(ProblemName::Ellipsoid),
            "rosenbrock" => Ok(ProblemName::Rosenbrock),
            "ackley" => Ok(ProblemName::Ackley),
            "griewank" => Ok(ProblemName::Griewank),
            other => Err(Error::InvalidInput(format!("unknown problem '{other}'"))),
        }
    }
}

/// Anything the optimizers can evaluate: a dimension, a box and a scalar
/// objective to minimize.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn lower(&self) -> &[f64];
    fn upper(&self) -> &[f64];
    fn evaluate(&self, x: &[f64]) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkProblem {
    pub name: ProblemName,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BenchmarkProblem {
    /// Builds the problem with its standard symmetric bounds.
    pub fn new(name: ProblemName, dim: usize) -> Result<Self> {
        let w = name.half_width();
        Self::with_bounds(name, vec![-w; dim], vec![w; dim])
    }

    pub fn with_bounds(name: ProblemName, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let dim = lower.len();
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if upper.len() != dim {
            return Err(Error::InvalidInput(format!("bounds length mismatch: {} lower vs {} upper", dim, upper.len())));
        }
        if let Some(i) = (0..dim).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::InvalidInput(format!("lower[{i}]={} must be below upper[{i}]={}", lower[i], upper[i])));
        }
        Ok(Self { name, dim, lower, upper })
    }
}

impl Objective for BenchmarkProblem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        evaluate(self, x)
    }
}

/// Evaluates the benchmark at `x`. No clamping is applied.
pub fn evaluate(problem: &BenchmarkProblem, x: &[f64]) -> Result<f64> {
    if x.len() != problem.dim {
        return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", problem.dim, x.len())));
    }
    Ok(match problem.name {
        ProblemName::Ellipsoid => ellipsoid(x),
        ProblemName::Rosenbrock => rosenbrock(x),
        ProblemName::Ackley => ackley(x),
        ProblemName::Griewank => griewank(x),
    })
}

fn ellipsoid(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    // grouped so both pairs cancel exactly at the origin
    20.0 * (1.0 - (-0.2 * sq.sqrt()).exp()) + (E - cos.exp())
}

fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x.iter().enumerate().map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos()).product();
    1.0 + sum - prod
}

/// Wraps an objective and counts calls to `evaluate`.
pub struct CountingObjective<'a> {
    inner: &'a dyn Objective,
    calls: AtomicUsize,
}

impl<'a> CountingObjective<'a> {
    pub fn new(inner: &'a dyn Objective) -> Self {
        Self { inner, calls: AtomicUsize::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Objective for CountingObjective<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn lower(&self) -> &[f64] {
        self.inner.lower()
    }

    fn upper(&self) -> &[f64] {
        self.inner.upper()
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.evaluate(x)
    }
}

/// Latin hypercube design: per dimension, each of the `count` equal strata
/// holds exactly one point, placed uniformly inside its stratum.
pub fn lhs_sample<R: Rng + ?Sized>(
    count: usize,
    objective: &dyn Objective,
    rng: &mut R,
) -> Result<Vec<DecisionVector>> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let dim = objective.dim();
    let (lower, upper) = (objective.lower(), objective.upper());
    let mut points = vec![vec![0.0; dim]; count];
    let mut strata: Vec<usize> = (0..count).collect();
    for d in 0..dim {
        strata.shuffle(rng);
        let width = (upper[d] - lower[d]) / count as f64;
        for (point, &s) in points.iter_mut().zip(&strata) {
            let offset: f64 = rng.random();
            let v = lower[d] + (s as f64 + offset) * width;
            point[d] = v.clamp(lower[d], upper[d]);
        }
    }
    Ok(points)
}

/// Evenly spaced grid over a 2-D box, endpoints included, ordered with the
/// first coordinate varying slowest.
pub fn grid_sample(points_per_dim: usize, objective: &dyn Objective) -> Result<Vec<DecisionVector>> {
    if objective.dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "grid sampling needs a 2-D problem, got {} dimensions",
            objective.dim()
        )));
    }
    if points_per_dim == 0 {
        return Err(Error::InvalidInput("points per dimension must be positive".into()));
    }
    let axis = |d: usize| -> Vec<f64> {
        let (lo, hi) = (objective.lower()[d], objective.upper()[d]);
        if points_per_dim == 1 {
            return vec![0.5 * (lo + hi)];
        }
        let step = (hi - lo) / (points_per_dim - 1) as f64;
        (0..points_per_dim).map(|k| if k + 1 == points_per_dim { hi } else { lo + k as f64 * step }).collect()
    };
    let (xs, ys) = (axis(0), axis(1));
    Ok(xs.iter().flat_map(|&a| ys.iter().map(move |&b| vec![a, b])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn unit_box(dim: usize) -> BenchmarkProblem {
        BenchmarkProblem::with_bounds(ProblemName::Ellipsoid, vec![0.0; dim], vec![1.0; dim]).unwrap()
    }

    #[test]
    fn documented_values() {
        let ack = BenchmarkProblem::new(ProblemName::Ackley, 5).unwrap();
        assert_eq!(evaluate(&ack, &[0.0; 5]).unwrap(), 0.0);
        let ros = BenchmarkProblem::new(ProblemName::Rosenbrock, 2).unwrap();
        assert_eq!(evaluate(&ros, &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(evaluate(&ros, &[0.0, 0.0]).unwrap(), 1.0);
        let ell = BenchmarkProblem::new(ProblemName::Ellipsoid, 2).unwrap();
        assert_eq!(evaluate(&ell, &[1.0, 1.0]).unwrap(), 3.0);
        let gri = BenchmarkProblem::new(ProblemName::Griewank, 3).unwrap();
        assert_eq!(evaluate(&gri, &[0.0; 3]).unwrap(), 0.0);
    }

    #[test]
    fn standard_bounds() {
        for (name, w) in [
            (ProblemName::Ellipsoid, 5.12),
            (ProblemName::Rosenbrock, 2.048),
            (ProblemName::Ackley, 32.768),
            (ProblemName::Griewank, 600.0),
        ] {
            let p = BenchmarkProblem::new(name, 3).unwrap();
            assert!(p.lower.iter().all(|&v| v == -w));
            assert!(p.upper.iter().all(|&v| v == w));
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = BenchmarkProblem::new(ProblemName::Griewank, 3).unwrap();
        assert!(matches!(evaluate(&p, &[0.0; 2]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn names_parse() {
        for name in ProblemName::ALL {
            assert_eq!(name.as_str().parse::<ProblemName>().unwrap(), name);
        }
        assert!("sphere".parse::<ProblemName>().is_err());
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(BenchmarkProblem::with_bounds(ProblemName::Ackley, vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn lhs_four_strata() {
        let p = unit_box(1);
        let pts = lhs_sample(4, &p, &mut seeded(3)).unwrap();
        let mut hits = [0usize; 4];
        for pt in &pts {
            hits[((pt[0] * 4.0).floor() as usize).min(3)] += 1;
        }
        assert_eq!(hits, [1, 1, 1, 1]);
    }

    #[test]
    fn lhs_fifty_in_bounds_and_deterministic() {
        let p = BenchmarkProblem::new(ProblemName::Ellipsoid, 2).unwrap();
        let a = lhs_sample(50, &p, &mut seeded(11)).unwrap();
        let b = lhs_sample(50, &p, &mut seeded(11)).unwrap();
        assert_eq!(a.len(), 50);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|v| (-5.12..=5.12).contains(v)));
    }

    #[test]
    fn lhs_zero_count() {
        assert!(lhs_sample(0, &unit_box(2), &mut seeded(0)).is_err());
    }

    #[test]
    fn grid_shapes() {
        let p = unit_box(2);
        let g = grid_sample(2, &p).unwrap();
        assert_eq!(g, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(grid_sample(3, &p).unwrap().contains(&vec![0.5, 0.5]));
        let e = BenchmarkProblem::new(ProblemName::Ackley, 2).unwrap();
        assert_eq!(grid_sample(20, &e).unwrap().len(), 400);
        assert!(grid_sample(20, &unit_box(3)).is_err());
    }

    #[test]
    fn counting_wrapper_counts() {
        let p = BenchmarkProblem::new(ProblemName::Ackley, 2).unwrap();
        let c = CountingObjective::new(&p);
        c.evaluate(&[0.0, 0.0]).unwrap();
        c.evaluate(&[1.0, 0.0]).unwrap();
        assert_eq!(c.calls(), 2);
    }
}
