use super::{optimize, OptimizerConfig, OptimizerKind, OptimizerRun};
use crate::error::{Error, Result};
use crate::numkit::Scalar;

/// Independent repeats of one optimizer on one objective.
#[derive(Clone, Debug)]
pub struct MultiRun<T> {
    pub kind: OptimizerKind,
    pub runs: Vec<OptimizerRun<T>>,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub std: f64,
    pub min: f64,
}

impl<T: Scalar> MultiRun<T> {
    pub fn best_values(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.best_f.as_f64()).collect()
    }
}

/// Runs `runs` repeats with seeds `cfg.seed + i`.
pub fn multi_run<T, F>(kind: OptimizerKind, objective: F, cfg: &OptimizerConfig<T>, runs: usize) -> Result<MultiRun<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    if runs == 0 {
        return Err(Error::Param("runs must be >= 1".into()));
    }
    let runs: Vec<OptimizerRun<T>> = (0..runs)
        .map(|i| optimize(kind, &objective, &cfg.with_seed(cfg.seed.wrapping_add(i as u64)), None))
        .collect::<Result<_>>()?;
    let best: Vec<f64> = runs.iter().map(|r| r.best_f.as_f64()).collect();
    let n = best.len() as f64;
    let mean = best.iter().sum::<f64>() / n;
    let std = if best.len() > 1 {
        (best.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let min = best.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(MultiRun {
        kind,
        runs,
        mean,
        std,
        min,
    })
}
