//! Artificial liver classifier (ALC) with the FOX and IFOX metaheuristic
//! optimizers, CEC2019 benchmark functions, dataset preprocessing, metrics
//! and the cross-validation harness used to evaluate them.
//!
//! Numeric kernels are generic over [`numkit::Scalar`] (`f32` or `f64`);
//! the aliases below pin the common concrete types.

pub mod cec2019;
pub mod data;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod model;
pub mod numkit;
pub mod optim;

pub use error::{Error, Result};

pub type Matrix64 = numkit::Matrix<f64>;
pub type Matrix32 = numkit::Matrix<f32>;
pub type AlcParams64 = model::AlcParams<f64>;
pub type AlcParams32 = model::AlcParams<f32>;
pub type OptimizerConfig64 = optim::OptimizerConfig<f64>;
pub type OptimizerRun64 = optim::OptimizerRun<f64>;
