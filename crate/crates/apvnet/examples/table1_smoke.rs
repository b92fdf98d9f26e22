//! Desk-scale run of the four-variant comparison on a synthetic corpus.
//!
//! The real experiment points `table1` at the downloaded news corpus with the
//! default 600 epochs; this example generates a small two-class corpus whose
//! classes differ in letter distribution and trains briefly, exercising the
//! identical pipeline end to end.
//!
//! ```bash
//! cargo run --example table1_smoke
//! ```

use apvnet::experiment::{run_table1, ExperimentConfig};
use apvnet::metrics::format_table;
use apvnet::synthetic::write_synthetic_corpus;

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let (fake, true_) = write_synthetic_corpus(dir.path(), 400, 11).unwrap();
    println!("synthetic corpus: {} and {}", fake.display(), true_.display());

    let mut config = ExperimentConfig::new(fake, true_, dir.path().join("out"));
    config.master_seed = 42;
    config.train_size = 500;
    config.test_size = 200;
    config.epochs = 40;
    config.batch_size = 100;

    let results = run_table1(&config, |line| println!("  {line}")).unwrap();

    let rows: Vec<_> = results
        .iter()
        .map(|(v, r)| (v.label(), r.metrics.clone()))
        .collect();
    println!("\n{}", format_table(&rows));
    println!("split digest: {}", &results[0].1.split_digest[..16]);
    println!("reports under: {}", config.out_dir.display());
}
