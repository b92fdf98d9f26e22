//! Trainer sanity check: two separable Gaussian blobs must be learned to
//! perfect training accuracy within 50 epochs.
//!
//! ```bash
//! cargo run --example train_synthetic
//! ```

use apvnet::metrics;
use apvnet::nn::{train, TrainConfig};
use apvnet::synthetic::two_blob_design_matrix;

fn main() {
    let matrix = two_blob_design_matrix(500, 42);
    let config = TrainConfig {
        epochs: 50,
        batch_size: 50,
        ..TrainConfig::default()
    };
    let (model, history) = train(&matrix, &config, 7).unwrap();

    let preds = model.predict_batch(&matrix.inputs(), 0.5).unwrap();
    let report = metrics::report(&metrics::confusion(&preds, &matrix.labels).unwrap()).unwrap();

    println!("rows: {}", matrix.len());
    println!("epoch  1 mean loss: {:.6}", history.epoch_loss[0]);
    println!("epoch 10 mean loss: {:.6}", history.epoch_loss[9]);
    println!("epoch 50 mean loss: {:.6}", history.epoch_loss[49]);
    println!("training accuracy:  {:.4}", report.accuracy);
}
