//! Desk-scale N-sweep (N-SAPV with standard subtraction) on a synthetic
//! corpus. The full protocol uses 1000 epochs on the real corpus.
//!
//! ```bash
//! cargo run --example nsweep_smoke
//! ```

use apvnet::experiment::{run_nsweep, ExperimentConfig};
use apvnet::synthetic::write_synthetic_corpus;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let (fake, true_) = write_synthetic_corpus(dir.path(), 400, 23).unwrap();

    let mut config = ExperimentConfig::new(fake, true_, dir.path().join("out"));
    config.master_seed = 42;
    config.train_size = 500;
    config.test_size = 200;
    config.epochs = 30;
    config.batch_size = 100;

    let entries = run_nsweep(&config, &[0, 1, 2, 3], |line| println!("  {line}")).unwrap();

    println!("\n{:<6} {:<10}", "N", "accuracy");
    for e in &entries {
        println!("{:<6} {:<10.4}", e.n, e.accuracy);
    }
    println!(
        "\nsweep csv: {}",
        config.out_dir.join("nsweep.csv").display()
    );
}
