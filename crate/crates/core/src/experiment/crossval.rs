use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::persist::{SavedModel, TrainingMeta};
use super::pipeline::{model_features, resolve_lobules, FittedPreprocessing};
use super::registry::load_dataset;
use super::RunOptions;
use crate::data::{stratified_kfold, Dataset, FoldPlan, Role};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, MetricReport, Split};
use crate::model::{train, ModelShape, TrainConfig, Variant};
use crate::numkit::{mix_seed, RngStream};

const FOLD_STREAM: u64 = 0x1u64 << 32;
const TRAIN_STREAM: u64 = 0x2u64 << 32;
const REFIT_STREAM: u64 = 0x3u64 << 32;

/// Training and validation metrics of one fold.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldResult {
    pub fold: usize,
    pub report: MetricReport,
    pub train: Split,
    pub valid: Split,
    /// Incumbent training loss per epoch.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct CrossvalResult {
    pub config: ExperimentConfig,
    pub lobules: usize,
    pub rows: usize,
    pub folds: Vec<FoldResult>,
    pub mean: MetricReport,
    pub notices: Vec<String>,
    /// Model refit on all rows, when requested.
    pub model: Option<SavedModel>,
    pub total_time: f64,
}

/// Runs `f` over `items` on a pool capped at `jobs` threads (all cores when
/// `None`). Output order follows input order.
pub(crate) fn parallel_map<T, R, F>(items: &[T], jobs: Option<usize>, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Loads the configured dataset and cross-validates on it.
pub fn run_crossval(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<CrossvalResult> {
    cfg.validate()?;
    let ds = load_dataset(cfg, &opts.data_dir)?;
    crossval_dataset(&ds, cfg, opts)
}

/// The fold assignment used for `seed`.
pub fn fold_plan(ds: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    stratified_kfold(&ds.y, k, &mut RngStream::new(mix_seed(seed, FOLD_STREAM)))
}

/// Cross-validates on an already loaded dataset. Each fold fits the
/// preprocessing on its training rows, trains the classifier from its own
/// derived seed and scores both splits; results do not depend on the
/// number of worker threads.
pub fn crossval_dataset(ds: &Dataset, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<CrossvalResult> {
    cfg.validate()?;
    let start = Instant::now();
    let mut notices = Vec::new();
    let features = model_features(ds.n_features(), &cfg.preprocessing);
    let (lobules, notice) = resolve_lobules(cfg, features)?;
    notices.extend(notice);
    let shape = ModelShape::new(features, lobules, ds.n_classes)?;
    if cfg.variant == Variant::IdentityVitamin && lobules != ds.n_classes {
        return Err(Error::Variant(format!(
            "identity-vitamin needs p = o, got p = {lobules}, o = {}",
            ds.n_classes
        )));
    }

    let plan = fold_plan(ds, cfg.k_folds, cfg.seed)?;
    notices.extend(plan.warnings.iter().cloned());
    let folds: Vec<usize> = (0..cfg.k_folds).collect();
    let results = parallel_map(&folds, opts.jobs, |&fold| run_fold(ds, &plan, fold, shape, cfg))?;
    let folds: Vec<FoldResult> = results.into_iter().collect::<Result<_>>()?;
    for f in &folds {
        if f.valid.zero_division || f.train.zero_division {
            notices.push(format!(
                "fold {}: some class had no predictions; its precision counted as 0",
                f.fold
            ));
        }
    }
    let reports: Vec<MetricReport> = folds.iter().map(|f| f.report).collect();
    let mean = MetricReport::mean(&reports).ok_or_else(|| Error::InsufficientData("no folds".into()))?;

    let model = if opts.refit { Some(refit(ds, cfg, shape)?) } else { None };
    Ok(CrossvalResult {
        config: cfg.clone(),
        lobules,
        rows: ds.len(),
        folds,
        mean,
        notices,
        model,
        total_time: start.elapsed().as_secs_f64(),
    })
}

fn train_config(cfg: &ExperimentConfig, seed: u64) -> TrainConfig {
    TrainConfig {
        epochs: cfg.epochs,
        agents: cfg.agents,
        seed,
        optimizer: cfg.optimizer,
    }
}

fn run_fold(
    ds: &Dataset,
    plan: &FoldPlan,
    fold: usize,
    shape: ModelShape,
    cfg: &ExperimentConfig,
) -> Result<FoldResult> {
    let t0 = Instant::now();
    let (train_idx, valid_idx) = plan.split(fold);
    let train_ds = ds.subset(&train_idx, Role::Train)?;
    let valid_ds = ds.subset(&valid_idx, Role::Validation)?;
    let prep = FittedPreprocessing::fit(&train_ds, &cfg.preprocessing)?;
    let x_train = prep.transform(&train_ds.x)?;
    let x_valid = prep.transform(&valid_ds.x)?;
    let seed = mix_seed(cfg.seed, TRAIN_STREAM + fold as u64);
    let model = train(&x_train, &train_ds.y, shape, cfg.variant, &train_config(cfg, seed))?;
    let train_split = evaluate(&train_ds.y, &model.predict_proba(&x_train)?)?;
    let valid_split = evaluate(&valid_ds.y, &model.predict_proba(&x_valid)?)?;
    Ok(FoldResult {
        fold,
        report: MetricReport::from_splits(&train_split, &valid_split, t0.elapsed().as_secs_f64()),
        train: train_split,
        valid: valid_split,
        history: model.run.history,
    })
}

fn refit(ds: &Dataset, cfg: &ExperimentConfig, shape: ModelShape) -> Result<SavedModel> {
    let all: Vec<usize> = (0..ds.len()).collect();
    let train_ds = ds.subset(&all, Role::Train)?;
    let prep = FittedPreprocessing::fit(&train_ds, &cfg.preprocessing)?;
    let x = prep.transform(&train_ds.x)?;
    let seed = mix_seed(cfg.seed, REFIT_STREAM);
    let model = train(&x, &train_ds.y, shape, cfg.variant, &train_config(cfg, seed))?;
    Ok(SavedModel {
        params: model.params,
        variant: cfg.variant,
        meta: TrainingMeta {
            seed,
            epochs: cfg.epochs,
            agents: cfg.agents,
            dataset_id: cfg.dataset_id.clone(),
            preprocessing: (!prep.is_identity()).then_some(prep),
            label_names: ds.label_names.clone(),
        },
    })
}

/// One ablation row; `report` is `None` when the variant cannot run on
/// this dataset (`skipped` says why).
#[derive(Clone, Debug, PartialEq)]
pub struct AblationRow {
    pub variant: Variant,
    pub report: Option<MetricReport>,
    pub skipped: Option<String>,
}

pub fn run_ablation(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<AblationRow>> {
    cfg.validate()?;
    let ds = load_dataset(cfg, &opts.data_dir)?;
    ablation_dataset(&ds, cfg, opts)
}

/// Cross-validates every variant on the same folds and seeds.
pub fn ablation_dataset(ds: &Dataset, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<AblationRow>> {
    let no_refit = RunOptions {
        refit: false,
        ..opts.clone()
    };
    Variant::ALL
        .iter()
        .map(|&variant| {
            let vcfg = ExperimentConfig { variant, ..cfg.clone() };
            match crossval_dataset(ds, &vcfg, &no_refit) {
                Ok(r) => Ok(AblationRow {
                    variant,
                    report: Some(r.mean),
                    skipped: None,
                }),
                Err(Error::Variant(why)) => Ok(AblationRow {
                    variant,
                    report: None,
                    skipped: Some(why),
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Mean validation accuracy for one lobule count of a grid search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub lobules: usize,
    pub accuracy: f64,
    pub loss: f64,
}

/// Cross-validates each admissible lobule count in `grid` and returns the
/// points plus the count with the highest mean validation accuracy (the
/// smaller count wins ties).
pub fn lobule_search(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    grid: &[usize],
    opts: &RunOptions,
) -> Result<(Vec<GridPoint>, usize)> {
    let features = model_features(ds.n_features(), &cfg.preprocessing);
    let mut candidates: Vec<usize> = grid.iter().copied().filter(|&p| p >= features).collect();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.is_empty() {
        return Err(Error::Config(format!(
            "no lobule count in {grid:?} is >= the {features} features"
        )));
    }
    let no_refit = RunOptions {
        refit: false,
        ..opts.clone()
    };
    let mut points = Vec::with_capacity(candidates.len());
    for p in candidates {
        let pcfg = ExperimentConfig {
            lobules: Some(p),
            ..cfg.clone()
        };
        let r = crossval_dataset(ds, &pcfg, &no_refit)?;
        points.push(GridPoint {
            lobules: p,
            accuracy: r.mean.accuracy,
            loss: r.mean.loss,
        });
    }
    let best = points
        .iter()
        .fold(None::<GridPoint>, |acc, pt| match acc {
            Some(b) if b.accuracy >= pt.accuracy => Some(b),
            _ => Some(*pt),
        })
        .map(|b| b.lobules)
        .unwrap_or(features);
    Ok((points, best))
}
