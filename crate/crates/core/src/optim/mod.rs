//! Gradient-free population optimizers: IFOX, the original FOX it derives
//! from, and a uniform random-search control.
//!
//! All three share one loop: evaluate every agent, keep the incumbent on
//! strict improvement, record the incumbent fitness, then move the agents.
//! Random draws happen on a single stream in a fixed order (epoch-major,
//! agent-minor), so a seed fully determines a run.

mod config;
mod fox;
mod ifox;
mod multi;
mod random;

use std::time::Instant;

pub use config::{OptimizerConfig, OptimizerKind, OptimizerRun};
pub use fox::{optimize_fox, FOX_C1, FOX_C2, GRAVITY};
pub use ifox::{alpha_schedule, jump, optimize_ifox};
pub use multi::{multi_run, MultiRun};
pub use random::random_search;

use crate::error::{Error, Result};
use crate::numkit::{RngStream, Scalar};

/// Runs `kind` on `objective`. When `start` is given it replaces the first
/// agent of the initial population.
pub fn optimize<T, F>(
    kind: OptimizerKind,
    objective: F,
    cfg: &OptimizerConfig<T>,
    start: Option<&[T]>,
) -> Result<OptimizerRun<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> T,
{
    match kind {
        OptimizerKind::Ifox => ifox::run(objective, cfg, start),
        OptimizerKind::Fox => fox::run(objective, cfg, start),
        OptimizerKind::Random => random::run(objective, cfg, start),
    }
}

/// Population drawn uniformly from the search box.
pub(crate) fn init_population<T: Scalar>(
    cfg: &OptimizerConfig<T>,
    rng: &mut RngStream,
    start: Option<&[T]>,
) -> Result<Vec<Vec<T>>> {
    cfg.validate()?;
    let mut pop: Vec<Vec<T>> = (0..cfg.agents)
        .map(|_| rng.uniform_vec(cfg.lower, cfg.upper, cfg.dim))
        .collect();
    if let Some(s) = start {
        if s.len() != cfg.dim {
            return Err(Error::shape("optimizer start point", s.len(), cfg.dim));
        }
        pop[0] = s.to_vec();
    }
    Ok(pop)
}

/// Best-so-far bookkeeping shared by every optimizer.
pub(crate) struct Tracker<T> {
    pub best_x: Vec<T>,
    pub best_f: T,
    pub history: Vec<T>,
    pub evals: usize,
    started: Instant,
}

impl<T: Scalar> Tracker<T> {
    pub fn new(dim: usize, epochs: usize) -> Self {
        Self {
            best_x: vec![T::zero(); dim],
            best_f: T::infinity(),
            history: Vec::with_capacity(epochs),
            evals: 0,
            started: Instant::now(),
        }
    }

    /// Evaluates every agent and records the epoch's incumbent.
    pub fn evaluate_epoch(&mut self, objective: &impl Fn(&[T]) -> T, pop: &[Vec<T>], epoch: usize) -> Result<()> {
        for (agent, x) in pop.iter().enumerate() {
            let f = objective(x);
            self.evals += 1;
            if !f.is_finite() {
                return Err(Error::Numeric(format!(
                    "objective returned {f} at epoch {epoch}, agent {agent}"
                )));
            }
            if f < self.best_f {
                self.best_f = f;
                self.best_x.clone_from(x);
            }
        }
        self.history.push(self.best_f);
        Ok(())
    }

    pub fn finish(self) -> OptimizerRun<T> {
        OptimizerRun {
            best_x: self.best_x,
            best_f: self.best_f,
            history: self.history,
            evals: self.evals,
            wall_time: self.started.elapsed().as_secs_f64(),
        }
    }
}

pub(crate) fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::from_count(xs.len())
}
