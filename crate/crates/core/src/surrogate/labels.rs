//! Binary "better"/"worse" labels derived from objective values.
//! Label `true` is the better class (lower objective).

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Indices of `values` in ascending order; ties keep input order.
pub fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    idx
}

/// Number of positives the top-k rule assigns among `len` values.
pub fn topk_count(len: usize, ratio: f64) -> usize {
    ((ratio * len as f64).floor() as usize).max(1).min(len)
}

/// Labels the best `max(1, floor(ratio * len))` values as better.
pub fn assign_labels_topk(values: &[f64], ratio: f64) -> Vec<bool> {
    let k = topk_count(values.len(), ratio);
    let mut labels = vec![false; values.len()];
    for &i in ascending_order(values).iter().take(k) {
        labels[i] = true;
    }
    labels
}

/// Median with the mean-of-middle-pair convention for even lengths.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = sorted.len();
    if n.is_multiple_of(2) {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    } else {
        sorted[n / 2]
    }
}

/// Labels values strictly below the median as better.
pub fn assign_labels_median(values: &[f64]) -> Vec<bool> {
    let m = median(values);
    values.iter().map(|&v| v < m).collect()
}

/// How training rows are labeled and, for oracles, how the ground-truth label
/// of a query is decided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelRule {
    /// Best `ratio` fraction of the training values. A query is better when
    /// it would rank inside the top-k of the training values plus itself.
    TopK(f64),
    /// Strictly below the training median.
    Median,
    /// Training rows use the median rule; queries are judged by whether they
    /// belong to the better half of the query batch.
    QueryHalf,
}

impl LabelRule {
    pub fn training_labels(&self, values: &[f64]) -> Vec<bool> {
        match *self {
            LabelRule::TopK(ratio) => assign_labels_topk(values, ratio),
            LabelRule::Median | LabelRule::QueryHalf => assign_labels_median(values),
        }
    }

    /// Ground-truth labels of `queries` given the training values.
    pub fn query_labels(&self, train: &[f64], queries: &[f64]) -> Vec<bool> {
        match *self {
            LabelRule::TopK(ratio) => {
                let k = topk_count(train.len() + 1, ratio);
                queries.iter().map(|&q| train.iter().filter(|&&y| y <= q).count() < k).collect()
            }
            LabelRule::Median => {
                let m = median(train);
                queries.iter().map(|&q| q < m).collect()
            }
            LabelRule::QueryHalf => assign_labels_topk(queries, 0.5),
        }
    }
}
