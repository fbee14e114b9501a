use super::{forward, init_params, make_variant, AlcParams, ModelShape, Variant};
use crate::data::one_hot;
use crate::error::{Error, Result};
use crate::metrics::log_loss;
use crate::numkit::{Matrix, RngStream, Scalar};
use crate::optim::{optimize, OptimizerConfig, OptimizerKind, OptimizerRun};

/// Defaults: 500 epochs, 10 agents, IFOX.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub agents: usize,
    pub seed: u64,
    pub optimizer: OptimizerKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            agents: 10,
            seed: 0,
            optimizer: OptimizerKind::Ifox,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrainedModel<T> {
    pub params: AlcParams<T>,
    pub variant: Variant,
    pub run: OptimizerRun<T>,
}

impl<T: Scalar> TrainedModel<T> {
    pub fn predict_proba(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        forward(x, &self.params, self.variant)
    }
}

/// Initializes C and V, installs the variant's frozen parts, then minimizes
/// the training log loss over the trainable parameters. The initial
/// parameters seed the first agent of the population; the search box is
/// [-1, 1], the initialization range.
pub fn train<T: Scalar>(
    x: &Matrix<T>,
    y: &[usize],
    shape: ModelShape,
    variant: Variant,
    cfg: &TrainConfig,
) -> Result<TrainedModel<T>> {
    if x.rows() != y.len() {
        return Err(Error::shape("train", x.shape_str(), format!("{} labels", y.len())));
    }
    if x.cols() != shape.features {
        return Err(Error::shape("train", x.shape_str(), format!("?x{}", shape.features)));
    }
    let targets: Matrix<T> = one_hot(y, shape.classes)?;
    let mut rng = RngStream::new(cfg.seed);
    let init = init_params(shape, &mut rng)?;
    let vm = make_variant(init, variant, &mut rng)?;
    let trainable = vm.trainable;
    let start = trainable.extract(&vm.params);

    let opt_cfg = OptimizerConfig::new(
        cfg.epochs,
        cfg.agents,
        start.len(),
        -T::one(),
        T::one(),
        rng.fork(1).seed(),
    )?;
    let base = vm.params.clone();
    let loss = |theta: &[T]| {
        let mut p = base.clone();
        trainable.embed_into(&mut p, theta).expect("optimizer keeps dimension");
        let probs = forward(x, &p, variant).expect("shapes validated before training");
        log_loss(&targets, &probs).expect("shapes validated before training")
    };
    let run = optimize(cfg.optimizer, loss, &opt_cfg, Some(&start))?;

    let mut params = vm.params;
    trainable.embed_into(&mut params, &run.best_x)?;
    Ok(TrainedModel { params, variant, run })
}
