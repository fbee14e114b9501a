use std::path::PathBuf;
use std::time::Instant;

use super::crossval::parallel_map;
use crate::cec2019::{evaluate, evaluate_with, FunctionId, Transform};
use crate::error::{Error, Result};
use crate::numkit::mix_seed;
use crate::optim::{multi_run, OptimizerConfig, OptimizerKind};

#[derive(Clone, Debug, PartialEq)]
pub struct OptbenchConfig {
    pub functions: Vec<FunctionId>,
    pub optimizers: Vec<OptimizerKind>,
    pub runs: usize,
    pub epochs: usize,
    pub agents: usize,
    pub seed: u64,
    /// Directory with `shift_data_{n}.txt` and `M_{n}_D10.txt` for F4–F10;
    /// identity transforms when absent.
    pub transform_dir: Option<PathBuf>,
}

impl Default for OptbenchConfig {
    /// All ten functions, IFOX and FOX, 30 runs of 500 epochs × 10 agents.
    fn default() -> Self {
        Self {
            functions: FunctionId::ALL.to_vec(),
            optimizers: vec![OptimizerKind::Ifox, OptimizerKind::Fox],
            runs: 30,
            epochs: 500,
            agents: 10,
            seed: 42,
            transform_dir: None,
        }
    }
}

/// Statistics of one (function, optimizer) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub function: FunctionId,
    pub optimizer: OptimizerKind,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    /// Runs whose best position left the search box.
    pub out_of_bounds: usize,
    /// Incumbent value per epoch, one vector per run.
    pub histories: Vec<Vec<f64>>,
    pub wall_time: f64,
}

impl CellResult {
    /// Per-epoch mean of the run histories.
    pub fn mean_history(&self) -> Vec<f64> {
        let n = self.histories.len() as f64;
        let len = self.histories.first().map_or(0, Vec::len);
        (0..len)
            .map(|e| self.histories.iter().map(|h| h[e]).sum::<f64>() / n)
            .collect()
    }
}

/// Per-function ranks (1 = lowest mean, ties share the average rank),
/// plus total and average rank per optimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTable {
    pub optimizers: Vec<OptimizerKind>,
    pub functions: Vec<FunctionId>,
    /// `ranks[optimizer][function]`.
    pub ranks: Vec<Vec<f64>>,
    pub totals: Vec<f64>,
    pub averages: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct OptbenchResult {
    pub config: OptbenchConfig,
    pub cells: Vec<CellResult>,
    pub ranks: RankTable,
}

impl OptbenchResult {
    pub fn cell(&self, function: FunctionId, optimizer: OptimizerKind) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.function == function && c.optimizer == optimizer)
    }
}

/// Average ranks, 1-based, ascending values first.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn rank_table(cells: &[CellResult], functions: &[FunctionId], optimizers: &[OptimizerKind]) -> Result<RankTable> {
    let mut ranks = vec![vec![0.0; functions.len()]; optimizers.len()];
    for (fi, &function) in functions.iter().enumerate() {
        let means: Vec<f64> = optimizers
            .iter()
            .map(|&o| {
                cells
                    .iter()
                    .find(|c| c.function == function && c.optimizer == o)
                    .map(|c| c.mean)
                    .ok_or_else(|| Error::Param(format!("no result for {function} / {o}")))
            })
            .collect::<Result<_>>()?;
        for (oi, r) in average_ranks(&means).into_iter().enumerate() {
            ranks[oi][fi] = r;
        }
    }
    let totals: Vec<f64> = ranks.iter().map(|r| r.iter().sum()).collect();
    let averages = totals.iter().map(|t| t / functions.len().max(1) as f64).collect();
    Ok(RankTable {
        optimizers: optimizers.to_vec(),
        functions: functions.to_vec(),
        ranks,
        totals,
        averages,
    })
}

fn load_transform(cfg: &OptbenchConfig, id: FunctionId) -> Result<Option<Transform>> {
    match &cfg.transform_dir {
        Some(dir) if id.is_transformed() => {
            let n = id.number();
            let dim = id.info().dim;
            Transform::load(
                dir.join(format!("shift_data_{n}.txt")),
                dir.join(format!("M_{n}_D{dim}.txt")),
                dim,
            )
            .map(Some)
        }
        _ => Ok(None),
    }
}

/// Runs every (function, optimizer) cell. All optimizers on a function
/// share the per-run seeds, so they start from the same populations.
pub fn run_optbench(cfg: &OptbenchConfig, jobs: Option<usize>) -> Result<OptbenchResult> {
    if cfg.functions.is_empty() || cfg.optimizers.is_empty() {
        return Err(Error::Config(
            "optbench needs at least one function and one optimizer".into(),
        ));
    }
    let mut cells_in = Vec::new();
    for &f in &cfg.functions {
        let transform = load_transform(cfg, f)?;
        for &o in &cfg.optimizers {
            cells_in.push((f, o, transform.clone()));
        }
    }
    let results = parallel_map(&cells_in, jobs, |(function, optimizer, transform)| {
        run_cell(cfg, *function, *optimizer, transform.as_ref())
    })?;
    let cells: Vec<CellResult> = results.into_iter().collect::<Result<_>>()?;
    let ranks = rank_table(&cells, &cfg.functions, &cfg.optimizers)?;
    Ok(OptbenchResult {
        config: cfg.clone(),
        cells,
        ranks,
    })
}

fn run_cell(
    cfg: &OptbenchConfig,
    function: FunctionId,
    optimizer: OptimizerKind,
    transform: Option<&Transform>,
) -> Result<CellResult> {
    let t0 = Instant::now();
    let info = function.info();
    let ocfg = OptimizerConfig::new(
        cfg.epochs,
        cfg.agents,
        info.dim,
        info.lower,
        info.upper,
        mix_seed(cfg.seed, function.number() as u64),
    )?;
    let objective = |x: &[f64]| -> f64 {
        match transform {
            Some(t) => evaluate_with(function, x, t),
            None => evaluate(function, x),
        }
        .expect("optimizer keeps the function's dimension")
    };
    let m = multi_run(optimizer, objective, &ocfg, cfg.runs)?;
    Ok(CellResult {
        function,
        optimizer,
        mean: m.mean,
        std: m.std,
        min: m.min,
        out_of_bounds: m
            .runs
            .iter()
            .filter(|r| r.out_of_bounds(info.lower, info.upper))
            .count(),
        histories: m.runs.into_iter().map(|r| r.history).collect(),
        wall_time: t0.elapsed().as_secs_f64(),
    })
}
