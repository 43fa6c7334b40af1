//! Two-sided Wilcoxon rank-sum test with midranks for ties.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::ranks::midranks;
use crate::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;
/// Largest combined sample size handled by exact enumeration.
pub const EXACT_MAX_COMBINED: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    Plus,
    Minus,
    Approx,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::Plus => "+",
            Symbol::Minus => "-",
            Symbol::Approx => "≈",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatOutcome {
    pub p_value: f64,
    /// `Plus` when `a` is significantly lower (better) than `b`.
    pub symbol: Symbol,
    pub method: TestMethod,
}

struct Pooled {
    /// Doubled midranks so every rank is an integer.
    ranks2: Vec<u64>,
    /// Doubled rank sum of `a`.
    w2: u64,
    na: usize,
    tie_term: f64,
}

fn pool(a: &[f64], b: &[f64]) -> Result<Pooled> {
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("rank-sum test needs finite values".into()));
    }
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks2: Vec<u64> = midranks(&all).into_iter().map(|r| (2.0 * r).round() as u64).collect();
    let w2 = ranks2[..a.len()].iter().sum();

    let mut sorted = all.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    Ok(Pooled { ranks2, w2, na: a.len(), tie_term })
}

/// Exact two-sided p-value: probability, over all equally likely ways of
/// assigning the pooled midranks to `a`, that the rank sum is at least as far
/// from its mean as observed.
pub fn wilcoxon_exact_p(a: &[f64], b: &[f64]) -> Result<f64> {
    let p = pool(a, b)?;
    let n = p.ranks2.len();
    let max_sum: u64 = p.ranks2.iter().sum();
    // ways[k][s]: subsets of size k with doubled rank sum s.
    let mut ways = vec![vec![0f64; max_sum as usize + 1]; p.na + 1];
    ways[0][0] = 1.0;
    for &r in &p.ranks2 {
        for k in (1..=p.na).rev() {
            let (lower, upper) = ways.split_at_mut(k);
            let (prev, cur) = (&lower[k - 1], &mut upper[0]);
            for s in (r as usize..=max_sum as usize).rev() {
                cur[s] += prev[s - r as usize];
            }
        }
    }
    // Doubled expectation is na * (n + 1); compare deviations times two.
    let e2 = (p.na * (n + 1)) as i64;
    let observed = (p.w2 as i64 - e2).abs();
    let (mut extreme, mut total) = (0.0, 0.0);
    for (s, &w) in ways[p.na].iter().enumerate() {
        total += w;
        if (s as i64 - e2).abs() >= observed {
            extreme += w;
        }
    }
    Ok((extreme / total).min(1.0))
}

/// Normal approximation with tie-corrected variance and continuity
/// correction.
pub fn wilcoxon_normal_p(a: &[f64], b: &[f64]) -> Result<f64> {
    let p = pool(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let var = na * nb / 12.0 * ((n + 1.0) - p.tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return Ok(1.0);
    }
    let w = p.w2 as f64 / 2.0;
    let dev = ((w - na * (n + 1.0) / 2.0).abs() - 0.5).max(0.0);
    let z = dev / var.sqrt();
    Ok(erfc(z / std::f64::consts::SQRT_2).min(1.0))
}

/// Two-sided rank-sum test of `a` against `b` at level `alpha`. Exact for
/// combined sizes up to [`EXACT_MAX_COMBINED`], normal approximation above.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<StatOutcome> {
    if a.len() < 3 || b.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "rank-sum test needs at least 3 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let first = a[0];
    if a.iter().chain(b).all(|&v| v == first) {
        return Ok(StatOutcome { p_value: 1.0, symbol: Symbol::Approx, method: TestMethod::Normal });
    }
    let (p_value, method) = if a.len() + b.len() <= EXACT_MAX_COMBINED {
        (wilcoxon_exact_p(a, b)?, TestMethod::Exact)
    } else {
        (wilcoxon_normal_p(a, b)?, TestMethod::Normal)
    };
    let pooled = pool(a, b)?;
    let e2 = (a.len() * (a.len() + b.len() + 1)) as u64;
    let symbol = if p_value >= alpha || pooled.w2 == e2 {
        Symbol::Approx
    } else if pooled.w2 < e2 {
        Symbol::Plus
    } else {
        Symbol::Minus
    };
    Ok(StatOutcome { p_value, symbol, method })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_spot_values() {
        let r = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], DEFAULT_ALPHA).unwrap();
        assert!((r.p_value - 0.1).abs() < 1e-12);
        assert_eq!(r.symbol, Symbol::Approx);
        assert_eq!(r.method, TestMethod::Exact);

        let a: Vec<f64> = (1..=5).map(f64::from).collect();
        let b: Vec<f64> = (10..=14).map(f64::from).collect();
        let r = wilcoxon_rank_sum(&a, &b, DEFAULT_ALPHA).unwrap();
        assert!((r.p_value - 2.0 / 252.0).abs() < 1e-12);
        assert_eq!(r.symbol, Symbol::Plus);
        assert_eq!(wilcoxon_rank_sum(&b, &a, DEFAULT_ALPHA).unwrap().symbol, Symbol::Minus);
    }

    #[test]
    fn identical_samples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(wilcoxon_rank_sum(&a, &a, DEFAULT_ALPHA).unwrap().symbol, Symbol::Approx);
        let flat = wilcoxon_rank_sum(&[2.0; 4], &[2.0; 5], DEFAULT_ALPHA).unwrap();
        assert_eq!((flat.p_value, flat.symbol), (1.0, Symbol::Approx));
    }

    #[test]
    fn too_small() {
        assert!(wilcoxon_rank_sum(&[1.0, 2.0], &[3.0, 4.0, 5.0], DEFAULT_ALPHA).is_err());
    }

    #[test]
    fn large_samples_use_normal() {
        let a: Vec<f64> = (0..30).map(f64::from).collect();
        let b: Vec<f64> = (0..30).map(|i| f64::from(i) + 20.0).collect();
        let r = wilcoxon_rank_sum(&a, &b, DEFAULT_ALPHA).unwrap();
        assert_eq!(r.method, TestMethod::Normal);
        assert_eq!(r.symbol, Symbol::Plus);
        assert!(r.p_value < 1e-4);
    }
}
