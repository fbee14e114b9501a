//! The artificial liver classifier.
//!
//! Input features pass through two mean-shifted linear maps. Phase I maps
//! `f` features onto `p` lobules with the cofactor matrix C and keeps only
//! positive activations; Phase II maps the lobules onto `o` classes with the
//! vitamin matrix V; a softmax turns the result into class probabilities.
//! Each map divides by its inner dimension and adds the mean of its own
//! weight matrix, recomputed on every pass.

mod forward;
mod params;
mod train;
mod variant;

pub use forward::{argmax_rows, forward, objective, phase1, phase2, pre_softmax, predict};
pub use params::{init_params, AlcParams, ModelShape, MAX_LOBULES};
pub use train::{train, TrainConfig, TrainedModel};
pub use variant::{block_average, make_variant, padded_embedding, Trainable, Variant, VariantModel};
