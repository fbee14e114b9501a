use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{Matrix, Scalar};

/// Lower clip applied to probabilities before taking logs.
pub const PROB_CLIP: f64 = 1e-15;

/// Multi-class cross-entropy `-(1/n) Σ_i Σ_c y_ic ln(clip(p_ic))`.
///
/// With two one-hot columns this is exactly the binary log loss.
pub fn log_loss<T: Scalar>(y_onehot: &Matrix<T>, probs: &Matrix<T>) -> Result<T> {
    if y_onehot.shape() != probs.shape() {
        return Err(Error::shape("log_loss", y_onehot.shape_str(), probs.shape_str()));
    }
    let lo = T::lit(PROB_CLIP);
    let hi = T::one() - lo;
    let mut total = T::zero();
    for (&y, &p) in y_onehot.as_slice().iter().zip(probs.as_slice()) {
        if y != T::zero() {
            total = total + y * p.max(lo).min(hi).ln();
        }
    }
    Ok(-total / T::from_count(y_onehot.rows()))
}

/// One-vs-rest counts for one class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub per_class: Vec<ClassCounts>,
    pub n: usize,
    pub correct: usize,
}

/// A macro-averaged score plus whether any class hit a zero denominator
/// (those classes contribute 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MacroScore {
    pub value: f64,
    pub zero_division: bool,
}

pub fn confusion_counts(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(Error::shape("confusion_counts", y_true.len(), y_pred.len()));
    }
    if let Some(&bad) = y_true.iter().chain(y_pred).find(|&&l| l >= n_classes) {
        return Err(Error::Param(format!(
            "label {bad} out of range for {n_classes} classes"
        )));
    }
    let n = y_true.len();
    let mut per_class = vec![ClassCounts::default(); n_classes];
    let mut correct = 0;
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t == p {
            per_class[t].tp += 1;
            correct += 1;
        } else {
            per_class[t].fn_ += 1;
            per_class[p].fp += 1;
        }
    }
    for c in &mut per_class {
        c.tn = n - c.tp - c.fp - c.fn_;
    }
    Ok(ConfusionCounts { per_class, n, correct })
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

impl ClassCounts {
    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// Harmonic mean of precision and recall; `None` when either is undefined
    /// or both are zero.
    pub fn f1(&self) -> Option<f64> {
        let (p, r) = (self.precision()?, self.recall()?);
        (p + r > 0.0).then(|| 2.0 * p * r / (p + r))
    }

    /// (TP + TN) / (TP + FP + TN + FN).
    pub fn accuracy(&self) -> Option<f64> {
        ratio(self.tp + self.tn, self.tp + self.fp + self.tn + self.fn_)
    }
}

impl ConfusionCounts {
    fn macro_avg(&self, per: impl Fn(&ClassCounts) -> Option<f64>) -> MacroScore {
        let mut zero_division = false;
        let total: f64 = self
            .per_class
            .iter()
            .map(|c| {
                per(c).unwrap_or_else(|| {
                    zero_division = true;
                    0.0
                })
            })
            .sum();
        MacroScore {
            value: total / self.per_class.len() as f64,
            zero_division,
        }
    }
}

/// Fraction of correctly classified samples.
pub fn accuracy(counts: &ConfusionCounts) -> f64 {
    if counts.n == 0 {
        0.0
    } else {
        counts.correct as f64 / counts.n as f64
    }
}

pub fn precision_macro(counts: &ConfusionCounts) -> MacroScore {
    counts.macro_avg(ClassCounts::precision)
}

pub fn recall_macro(counts: &ConfusionCounts) -> MacroScore {
    counts.macro_avg(ClassCounts::recall)
}

/// Mean of the per-class F1 scores.
pub fn f1_macro(counts: &ConfusionCounts) -> MacroScore {
    counts.macro_avg(|c| match (c.precision(), c.recall()) {
        (None, _) | (_, None) => None,
        (Some(p), Some(r)) if p + r == 0.0 => Some(0.0),
        _ => c.f1(),
    })
}

/// Training accuracy minus validation accuracy. Negative when validation did
/// better than training.
pub fn overfitting_gap(train_acc: f64, val_acc: f64) -> f64 {
    train_acc - val_acc
}
