//! Dense matrix kernel and seeded random streams.

mod matrix;
mod rng;
mod scalar;

pub use matrix::Matrix;
pub use rng::{mix_seed, RngStream};
pub use scalar::Scalar;
