use super::{init_population, mean, OptimizerConfig, OptimizerRun, Tracker};
use crate::error::{Error, Result};
use crate::numkit::{RngStream, Scalar};

/// Returns `(alpha_min, alpha)` for epoch `it` (0-based):
/// `alpha_min = 1 / (2 epochs)`, `alpha = alpha_min + (1 - alpha_min)(1 - it/epochs)`.
pub fn alpha_schedule<T: Scalar>(it: usize, epochs: usize) -> Result<(T, T)> {
    if it >= epochs {
        return Err(Error::Param(format!("epoch index {it} must be < epochs {epochs}")));
    }
    let e = T::from_count(epochs);
    let alpha_min = T::one() / (T::lit(2.0) * e);
    let alpha = alpha_min + (T::one() - alpha_min) * (T::one() - T::from_count(it) / e);
    Ok((alpha_min, alpha))
}

/// Jump height `4.905 t²` (half of g = 9.81, times t²).
pub fn jump<T: Scalar>(t: T) -> T {
    T::lit(4.905) * t * t
}

/// IFOX with a uniformly initialized population.
pub fn optimize_ifox<T, F>(objective: F, cfg: &OptimizerConfig<T>) -> Result<OptimizerRun<T>>
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
    let half = T::lit(0.5);

    for it in 0..cfg.epochs {
        tracker.evaluate_epoch(&objective, &pop, it)?;
        let best = &tracker.best_x;

        let (_, alpha) = alpha_schedule::<T>(it, cfg.epochs)?;
        // one time draw per epoch, shared by every agent
        let t = half * mean(&rng.uniform_vec(T::zero(), T::one(), cfg.dim));
        let jump = jump(t);

        for agent in pop.iter_mut() {
            let beta = rng.uniform_vec(-alpha, alpha, cfg.dim);
            if T::lit(rng.next_f64()) < alpha {
                for ((x, &b), &bx) in agent.iter_mut().zip(&beta).zip(best) {
                    *x = bx + b * alpha;
                }
            } else {
                for ((x, &b), &bx) in agent.iter_mut().zip(&beta).zip(best) {
                    *x = half * bx * (b * alpha) / jump;
                }
            }
        }
    }
    Ok(tracker.finish())
}
