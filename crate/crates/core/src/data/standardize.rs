use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

pub const STD_FLOOR: f64 = 1e-12;

/// Per-column mean and population standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit_matrix(x: &Matrix<f64>) -> Self {
        let n = x.rows() as f64;
        let mut means = Vec::with_capacity(x.cols());
        let mut stds = Vec::with_capacity(x.cols());
        for c in 0..x.cols() {
            let col = x.column(c);
            let first = col[0];
            if col.iter().all(|&v| v == first) {
                means.push(first);
                stds.push(STD_FLOOR);
                continue;
            }
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            means.push(mean);
            stds.push(var.sqrt().max(STD_FLOOR));
        }
        Self { means, stds }
    }

    /// Fits on a dataset view; validation views are refused.
    pub fn fit(ds: &Dataset) -> Result<Self> {
        ds.ensure_fit_allowed("standardizer")?;
        Ok(Self::fit_matrix(&ds.x))
    }

    pub fn transform(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        if x.cols() != self.means.len() {
            return Err(Error::shape(
                "standardize",
                x.shape_str(),
                format!("?x{}", self.means.len()),
            ));
        }
        let mut out = x.clone();
        for r in 0..out.rows() {
            for (c, v) in out.row_mut(r).iter_mut().enumerate() {
                *v = (*v - self.means[c]) / self.stds[c];
            }
        }
        Ok(out)
    }
}

/// Standardizes `x` with its own statistics.
pub fn standardize(x: &Matrix<f64>) -> (Matrix<f64>, Vec<f64>, Vec<f64>) {
    let s = Standardizer::fit_matrix(x);
    let out = s.transform(x).expect("same column count");
    (out, s.means, s.stds)
}
