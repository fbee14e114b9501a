use serde::{Deserialize, Serialize};

use super::{accuracy, confusion_counts, f1_macro, log_loss, precision_macro, recall_macro};
use crate::error::Result;
use crate::numkit::{Matrix, Scalar};

/// Metrics of one model on one set of rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub loss: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Some class had an undefined precision/recall and was scored 0.
    pub zero_division: bool,
}

/// Scores predicted class probabilities against true labels.
pub fn evaluate<T: Scalar>(y_true: &[usize], probs: &Matrix<T>) -> Result<Split> {
    let n_classes = probs.cols();
    let mut onehot = Matrix::<T>::zeros(probs.rows(), n_classes);
    for (i, &label) in y_true.iter().enumerate().take(probs.rows()) {
        if label < n_classes {
            onehot[(i, label)] = T::one();
        }
    }
    let loss = log_loss(&onehot, probs)?.as_f64();
    let y_pred = crate::model::argmax_rows(probs);
    let counts = confusion_counts(y_true, &y_pred, n_classes)?;
    let (p, r, f) = (precision_macro(&counts), recall_macro(&counts), f1_macro(&counts));
    Ok(Split {
        loss,
        accuracy: accuracy(&counts),
        precision: p.value,
        recall: r.value,
        f1: f.value,
        zero_division: p.zero_division || r.zero_division || f.zero_division,
    })
}

/// One row of a results table: validation metrics, overfitting gap and
/// training time. Column order: loss, accuracy, precision, recall, f1,
/// overfitting, time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub loss: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub overfitting_gap: f64,
    pub wall_time: f64,
}

impl MetricReport {
    pub fn from_splits(train: &Split, valid: &Split, wall_time: f64) -> Self {
        Self {
            loss: valid.loss,
            accuracy: valid.accuracy,
            precision: valid.precision,
            recall: valid.recall,
            f1: valid.f1,
            overfitting_gap: super::overfitting_gap(train.accuracy, valid.accuracy),
            wall_time,
        }
    }

    /// Arithmetic mean over rows; `None` for an empty slice.
    pub fn mean(rows: &[MetricReport]) -> Option<MetricReport> {
        if rows.is_empty() {
            return None;
        }
        let n = rows.len() as f64;
        let avg = |f: fn(&MetricReport) -> f64| rows.iter().map(f).sum::<f64>() / n;
        Some(MetricReport {
            loss: avg(|r| r.loss),
            accuracy: avg(|r| r.accuracy),
            precision: avg(|r| r.precision),
            recall: avg(|r| r.recall),
            f1: avg(|r| r.f1),
            overfitting_gap: avg(|r| r.overfitting_gap),
            wall_time: avg(|r| r.wall_time),
        })
    }

    pub fn csv_header(with_time: bool) -> &'static str {
        if with_time {
            "loss,accuracy,precision,recall,f1,overfitting,time_sec"
        } else {
            "loss,accuracy,precision,recall,f1,overfitting"
        }
    }

    /// Values in [`csv_header`](Self::csv_header) order, shortest
    /// round-trip formatting.
    pub fn csv_row(&self, with_time: bool) -> String {
        let mut row = format!(
            "{},{},{},{},{},{}",
            self.loss, self.accuracy, self.precision, self.recall, self.f1, self.overfitting_gap
        );
        if with_time {
            row.push_str(&format!(",{}", self.wall_time));
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_perfect_predictions() {
        let probs = Matrix::new(3, 3, vec![0.9, 0.05, 0.05, 0.1, 0.8, 0.1, 0.0, 0.0, 1.0]).unwrap();
        let s = evaluate(&[0, 1, 2], &probs).unwrap();
        assert_eq!(s.accuracy, 1.0);
        assert_eq!(s.f1, 1.0);
        assert!(!s.zero_division);
        assert!(s.loss > 0.0);
    }

    #[test]
    fn csv_row_roundtrips_values() {
        let r = MetricReport {
            loss: 0.1,
            accuracy: 0.975,
            precision: 1.0 / 3.0,
            recall: 0.5,
            f1: 0.25,
            overfitting_gap: -0.0125,
            wall_time: 1.5,
        };
        let row = r.csv_row(true);
        let parsed: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.1, 0.975, 1.0 / 3.0, 0.5, 0.25, -0.0125, 1.5]);
        assert_eq!(MetricReport::csv_header(true).split(',').count(), 7);
        assert_eq!(r.csv_row(false).split(',').count(), 6);
    }

    #[test]
    fn mean_of_rows() {
        let a = MetricReport {
            accuracy: 1.0,
            ..Default::default()
        };
        let b = MetricReport {
            accuracy: 0.5,
            ..Default::default()
        };
        assert_eq!(MetricReport::mean(&[a, b]).unwrap().accuracy, 0.75);
        assert!(MetricReport::mean(&[]).is_none());
    }
}
