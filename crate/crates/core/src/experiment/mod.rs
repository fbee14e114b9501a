//! Experiment orchestration: dataset registry and fetching,
//! cross-validation, ablation, optimizer benchmarking, model files and
//! report emission.

mod config;
mod crossval;
mod optbench;
mod persist;
mod pipeline;
mod registry;
mod report;

use std::path::PathBuf;

pub use config::{ExperimentConfig, Preprocessing};
pub use crossval::{
    ablation_dataset, crossval_dataset, fold_plan, lobule_search, run_ablation, run_crossval, AblationRow,
    CrossvalResult, FoldResult, GridPoint,
};
pub use optbench::{average_ranks, rank_table, run_optbench, CellResult, OptbenchConfig, OptbenchResult, RankTable};
pub use persist::{load_model, save_model, SavedModel, TrainingMeta, FORMAT_VERSION};
pub use pipeline::{model_features, resolve_lobules, FittedPreprocessing};
pub use registry::{
    data_dir, fetch_dataset, fetch_dataset_with, fetch_source, http_get, load_dataset, load_mnist, remote_source,
    sha256_hex, DatasetSpec, ExpectedFile, FetchReport, Origin, RemoteSource, DATASETS, DATA_DIR_ENV, MNIST_FILES,
};
pub use report::{write_ablation, write_crossval, write_grid, write_optbench, ReportFormat};

/// Execution settings that do not affect results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub data_dir: PathBuf,
    /// Train a final model on all rows after cross-validation.
    pub refit: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            jobs: None,
            data_dir: data_dir(),
            refit: true,
        }
    }
}
