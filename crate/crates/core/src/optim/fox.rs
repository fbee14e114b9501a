use super::{init_population, mean, OptimizerConfig, OptimizerRun, Tracker};
use crate::error::Result;
use crate::numkit::{RngStream, Scalar};

pub const GRAVITY: f64 = 9.81;
/// Direction factor used when the jump probability exceeds 0.18.
pub const FOX_C1: f64 = 0.18;
pub const FOX_C2: f64 = 0.82;

/// Original FOX: a fixed 50/50 split between the jump (exploitation) move
/// and the scaled random walk (exploration) move.
pub fn optimize_fox<T, F>(objective: F, cfg: &OptimizerConfig<T>) -> Result<OptimizerRun<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    run(objective, cfg, None)
}

/// Distance of sound travel: speed `best / T` times `T`, which is `best`
/// up to rounding.
pub(crate) fn sound_distance<T: Scalar>(best: &[T], time: &[T]) -> Vec<T> {
    best.iter().zip(time).map(|(&b, &t)| b / t * t).collect()
}

/// Uniform in `(0, 1]`, so a time is never zero.
fn time_draw<T: Scalar>(rng: &mut RngStream) -> T {
    T::lit(1.0 - rng.next_f64())
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
    let epochs = T::from_count(cfg.epochs);
    let mut min_time = T::one();

    for it in 0..cfg.epochs {
        tracker.evaluate_epoch(&objective, &pop, it)?;
        let best = &tracker.best_x;
        let a = T::lit(2.0) * (T::from_count(it) - T::one() / epochs);
        let mut epoch_times = Vec::new();

        for agent in pop.iter_mut() {
            if rng.next_f64() >= 0.5 {
                let p = rng.next_f64();
                let time: Vec<T> = (0..cfg.dim).map(|_| time_draw(&mut rng)).collect();
                let mean_time = mean(&time);
                let jump = half * T::lit(GRAVITY) * half * mean_time * mean_time;
                let dir = T::lit(if p > FOX_C1 { FOX_C1 } else { FOX_C2 });
                for (x, d) in agent.iter_mut().zip(sound_distance(best, &time)) {
                    *x = half * d * jump * dir;
                }
                epoch_times.push(mean_time);
            } else {
                for (x, &bx) in agent.iter_mut().zip(best) {
                    let r = T::lit(rng.next_f64());
                    *x = bx * r * min_time * a;
                }
            }
        }
        if !epoch_times.is_empty() {
            min_time = min_time.min(mean(&epoch_times));
        }
    }
    Ok(tracker.finish())
}
