//! How much smaller the 26-component representation is than the raw text.
//!
//! ```bash
//! cargo run --example compression_stats
//! ```

use apvnet::dataset::load_corpus;
use apvnet::experiment::compression_stats;
use apvnet::synthetic::synthetic_class_csv;

fn main() {
    let fake = synthetic_class_csv(0, 300, 5);
    let true_ = synthetic_class_csv(1, 300, 6);
    let corpus = load_corpus(fake.as_bytes(), true_.as_bytes()).unwrap();

    let stats = compression_stats(&corpus).unwrap();
    println!("records: {}", stats.included + stats.excluded);
    println!("included in means: {}", stats.included);
    println!("excluded (no letters): {}", stats.excluded);
    println!(
        "mean text length: {:.1} letters",
        stats.mean_text_length.unwrap()
    );
    println!(
        "mean size ratio (26 / letters): {:.4}",
        stats.mean_ratio.unwrap()
    );
}
