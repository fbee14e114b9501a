//! Classification metrics, the overfitting gap and the Wilcoxon signed-rank
//! test.

mod classification;
mod report;
mod wilcoxon;

pub use classification::{
    accuracy, confusion_counts, f1_macro, log_loss, overfitting_gap, precision_macro, recall_macro, ClassCounts,
    ConfusionCounts, MacroScore, PROB_CLIP,
};
pub use report::{evaluate, MetricReport, Split};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult, EXACT_MAX_N, MIN_PAIRS};
