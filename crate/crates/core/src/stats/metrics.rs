use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn check_lengths(pred: &[bool], real: &[bool]) -> Result<()> {
    if pred.len() != real.len() {
        return Err(Error::InvalidInput(format!("{} predictions for {} labels", pred.len(), real.len())));
    }
    if pred.is_empty() {
        return Err(Error::InvalidInput("no labels to score".into()));
    }
    Ok(())
}

/// Fraction of positions where the predicted label matches.
pub fn accuracy(pred: &[bool], real: &[bool]) -> Result<f64> {
    check_lengths(pred, real)?;
    let hits = pred.iter().zip(real).filter(|(p, r)| p == r).count();
    Ok(hits as f64 / pred.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    /// `true` is the positive class.
    pub fn from_labels(pred: &[bool], real: &[bool]) -> Result<Self> {
        check_lengths(pred, real)?;
        let mut c = Self::default();
        for (&p, &r) in pred.iter().zip(real) {
            match (p, r) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Precision, recall and F1; any zero denominator gives 0.
pub fn precision_recall_f1(c: &ConfusionCounts) -> (f64, f64, f64) {
    let p = ratio(c.tp, c.tp + c.fp);
    let r = ratio(c.tp, c.tp + c.fn_);
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_cases() {
        let real: Vec<bool> = (0..400).map(|i| i % 2 == 0).collect();
        let half: Vec<bool> = (0..400).map(|i| i < 200).collect();
        assert_eq!(accuracy(&half, &real).unwrap(), 0.5);
        assert_eq!(accuracy(&real, &real).unwrap(), 1.0);
        let flipped: Vec<bool> = real.iter().map(|b| !b).collect();
        assert_eq!(accuracy(&flipped, &real).unwrap(), 0.0);
        assert!(accuracy(&[true], &[true, false]).is_err());
        assert!(accuracy(&[], &[]).is_err());
    }

    #[test]
    fn prf_cases() {
        let (p, r, f1) = precision_recall_f1(&ConfusionCounts { tp: 3, fp: 1, fn_: 2, tn: 0 });
        assert_eq!((p, r), (0.75, 0.6));
        assert!((f1 - 2.0 * 0.45 / 1.35).abs() < 1e-12);
        assert_eq!(precision_recall_f1(&ConfusionCounts::default()), (0.0, 0.0, 0.0));
        let labels = [true, false, true, false];
        let c = ConfusionCounts::from_labels(&labels, &labels).unwrap();
        assert_eq!(precision_recall_f1(&c), (1.0, 1.0, 1.0));
    }
}
