//! Dataset ingestion and preprocessing: CSV and IDX loaders,
//! standardization, LDA, one-hot targets and stratified folds.

mod csv_io;
mod dataset;
mod idx;
mod kfold;
mod lda;
mod standardize;

pub use csv_io::{load_csv, load_features, parse_csv, parse_features, LabelColumn};
pub use dataset::{one_hot, Dataset, Role};
pub(crate) use idx::read_tensor;
pub use idx::{decode_idx, encode_idx, load_idx, IdxTensor, IMAGES_MAGIC, LABELS_MAGIC};
pub use kfold::{stratified_kfold, stratified_subsample, FoldPlan};
pub use lda::{lda_fit, lda_transform, orthonormality_error, LdaModel, LDA_RIDGE};
pub use standardize::{standardize, Standardizer, STD_FLOOR};
