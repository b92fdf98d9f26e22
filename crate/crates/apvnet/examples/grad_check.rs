//! Verifies backpropagation against central finite differences on small
//! architectures.
//!
//! ```bash
//! cargo run --example grad_check
//! ```

use apvnet::linalg::Matrix;
use apvnet::nn::{grad_check, MlpModel};
use apvnet::rng::SplitMix64;

fn main() {
    // Seed picked away from ReLU kink crossings; see the acceptance suite.
    let mut rng = SplitMix64::new(13);
    for dims in [vec![3usize, 4, 1], vec![5, 8, 8, 1]] {
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let model = MlpModel::init(rng.next_u64(), &dims).unwrap();
            let rows = 5;
            let mut inputs = Matrix::zeros(rows, dims[0]);
            for v in inputs.as_mut_slice() {
                *v = rng.next_in_range(-1.0, 1.0);
            }
            let labels: Vec<f64> = (0..rows).map(|_| rng.next_below(2) as f64).collect();
            let err = grad_check(&model, &inputs, &labels, 1e-5).unwrap();
            worst = worst.max(err);
        }
        println!(
            "dims {dims:?}: max relative error over 20 random batches = {worst:.3e} ({})",
            if worst < 1e-6 { "ok" } else { "TOO LARGE" }
        );
    }
}
