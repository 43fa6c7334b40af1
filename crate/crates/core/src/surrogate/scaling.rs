//! Min-max preprocessing with decimal truncation.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_FEATURE_PRECISION: u32 = 3;
pub const DEFAULT_VALUE_PRECISION: u32 = 5;

/// Rounds half-to-even at `decimals` places. Negative zero is normalized.
pub fn round_decimals(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (x * scale).round_ties_even() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Option<Self> {
        values.fold(None, |acc, v| match acc {
            None => Some(Range { min: v, max: v }),
            Some(r) => Some(Range { min: r.min.min(v), max: r.max.max(v) }),
        })
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    /// Affine map to [0,1]; a degenerate range maps everything to 0.5.
    pub fn scale(&self, z: f64) -> f64 {
        let w = self.width();
        if w > 0.0 {
            (z - self.min) / w
        } else {
            0.5
        }
    }

    pub fn unscale(&self, s: f64) -> f64 {
        s * self.width() + self.min
    }
}

/// Per-column feature ranges and an optional target range, fitted on the
/// training set only. Queries reuse the same transform and are not clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTransform {
    pub features: Vec<Range>,
    pub values: Option<Range>,
    pub feature_precision: u32,
    pub value_precision: u32,
}

impl ScalingTransform {
    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn with_value_precision(mut self, decimals: u32) -> Self {
        self.value_precision = decimals.max(1);
        self
    }

    pub fn scale_value(&self, y: f64) -> Result<f64> {
        let range = self.value_range()?;
        Ok(round_decimals(range.scale(y), self.value_precision))
    }

    pub fn value_range(&self) -> Result<Range> {
        self.values.ok_or_else(|| Error::InvalidState("scaling transform has no value range".into()))
    }
}

pub fn fit_scaling(x: &[Vec<f64>], y: Option<&[f64]>, feature_precision: u32) -> Result<ScalingTransform> {
    let first = x.first().ok_or_else(|| Error::InvalidInput("cannot fit scaling on an empty set".into()))?;
    let dim = first.len();
    if let Some(row) = x.iter().find(|r| r.len() != dim) {
        return Err(Error::InvalidInput(format!("ragged feature matrix: {} vs {} columns", dim, row.len())));
    }
    let features = (0..dim).map(|d| Range::of(x.iter().map(|r| r[d])).expect("nonempty")).collect();
    let values = match y {
        Some(y) if !y.is_empty() => Range::of(y.iter().copied()),
        _ => None,
    };
    Ok(ScalingTransform {
        features,
        values,
        feature_precision: feature_precision.max(1),
        value_precision: DEFAULT_VALUE_PRECISION,
    })
}

pub fn apply_scaling(t: &ScalingTransform, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != t.dim() {
        return Err(Error::InvalidInput(format!("vector has {} coordinates, transform expects {}", v.len(), t.dim())));
    }
    Ok(v.iter().zip(&t.features).map(|(&z, r)| round_decimals(r.scale(z), t.feature_precision)).collect())
}

pub fn inverse_scale_value(t: &ScalingTransform, scaled: f64) -> Result<f64> {
    Ok(t.value_range()?.unscale(scaled))
}
