use super::{init_population, OptimizerConfig, OptimizerRun, Tracker};
use crate::error::Result;
use crate::numkit::{RngStream, Scalar};

/// Resamples every agent uniformly from the box each epoch.
pub fn random_search<T, F>(objective: F, cfg: &OptimizerConfig<T>) -> Result<OptimizerRun<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    run(objective, cfg, None)
}

pub(super) fn run<T, F>(objective: F, cfg: &OptimizerConfig<T>, start: Option<&[T]>) -> Result<OptimizerRun<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    let mut rng = RngStream::new(cfg.seed);
    let mut pop = init_population(cfg, &mut rng, start)?;
    let mut tracker = Tracker::new(cfg.dim, cfg.epochs);
    for it in 0..cfg.epochs {
        tracker.evaluate_epoch(&objective, &pop, it)?;
        for agent in pop.iter_mut() {
            *agent = rng.uniform_vec(cfg.lower, cfg.upper, cfg.dim);
        }
    }
    Ok(tracker.finish())
}
