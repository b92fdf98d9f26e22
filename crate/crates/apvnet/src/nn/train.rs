//! Mini-batch training loop.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::optim::{optimizer_step, OptimizerKind, OptimizerState};
use super::{backward_from_pass, loss_bce, MlpModel, NnError, DEFAULT_LAYER_DIMS};
use crate::dataset::DesignMatrix;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    /// Seed for the per-epoch shuffles.
    pub seed: u64,
    pub shuffle_each_epoch: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 600,
            batch_size: 200,
            learning_rate: 1e-3,
            optimizer: OptimizerKind::Adam,
            seed: 0,
            shuffle_each_epoch: true,
        }
    }
}

/// Per-epoch record of the run: mean training loss and wall-clock seconds.
/// The loss trace is deterministic; the timings are not.
#[derive(Debug, Clone, Default)]
pub struct TrainHistory {
    pub epoch_loss: Vec<f64>,
    pub epoch_seconds: Vec<f64>,
}

/// Trains a freshly initialized default network (`26-128-128-128-1`) on the
/// design matrix.
///
/// Each epoch optionally reshuffles the row order (seeded), partitions it into
/// `batch_size` chunks (the last chunk may be smaller), and runs
/// forward/backward/update per chunk. The entire run is a deterministic
/// function of `(matrix, config, init_seed)`; wall-clock entries in the
/// history are the only nondeterministic output.
pub fn train(
    matrix: &DesignMatrix,
    config: &TrainConfig,
    init_seed: u64,
) -> Result<(MlpModel, TrainHistory), NnError> {
    let model = MlpModel::init(init_seed, &DEFAULT_LAYER_DIMS)?;
    train_model(model, matrix, config)
}

/// Training loop on an already-initialized model.
pub fn train_model(
    mut model: MlpModel,
    matrix: &DesignMatrix,
    config: &TrainConfig,
) -> Result<(MlpModel, TrainHistory), NnError> {
    let rows = matrix.len();
    if rows == 0 {
        return Err(NnError::EmptyTrainingSet);
    }
    if config.batch_size == 0 || config.batch_size > rows {
        return Err(NnError::BadBatchSize {
            batch_size: config.batch_size,
            rows,
        });
    }

    let inputs = matrix.inputs();
    let labels = matrix.labels_f64();
    let mut state = OptimizerState::new(&model, config.optimizer);
    let mut shuffle_rng = SplitMix64::new(config.seed);
    let mut order: Vec<usize> = (0..rows).collect();
    let mut history = TrainHistory::default();

    for _epoch in 0..config.epochs {
        let started = Instant::now();
        if config.shuffle_each_epoch {
            shuffle_rng.shuffle(&mut order);
        }
        let mut loss_sum = 0.0;
        for chunk in order.chunks(config.batch_size) {
            let x = inputs.select_rows(chunk);
            let y: Vec<f64> = chunk.iter().map(|&i| labels[i]).collect();
            let pass = model.forward_full(&x)?;
            loss_sum += loss_bce(&pass.probabilities, &y)? * chunk.len() as f64;
            let grads = backward_from_pass(&model, &pass, &y);
            optimizer_step(&mut model, &grads, &mut state, config.learning_rate)?;
        }
        history.epoch_loss.push(loss_sum / rows as f64);
        history.epoch_seconds.push(started.elapsed().as_secs_f64());
    }
    Ok((model, history))
}
