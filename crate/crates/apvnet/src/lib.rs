//! Letter-frequency features and a small dense network for two-class news
//! classification.
//!
//! A document is reduced to the 26 relative frequencies of its letters, with
//! two optional refinements: supplying a pseudo-count `N` to letters the text
//! never uses, and subtracting a standard English letter-frequency vector.
//! Those 26-component vectors feed a from-scratch `26-128-128-128-1` network
//! (ReLU hidden layers, sigmoid output, binary cross-entropy) trained with
//! seeded, bit-reproducible mini-batch updates.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run --example extract_features      # APV / N-SAPV / SSM on sample texts
//! cargo run --example grad_check            # backprop vs. central differences
//! cargo run --example train_synthetic       # trainer sanity check on separable blobs
//! cargo run --example table1_smoke          # four-variant comparison, synthetic corpus
//! cargo run --example nsweep_smoke          # N-sweep, synthetic corpus
//! cargo run --example compression_stats     # size of features vs. raw text
//! cargo run --example model_roundtrip       # save/load and the file format
//! ```
//!
//! The same capabilities are scriptable through the thin `apvnet` binary
//! (`ingest`, `featurize`, `train`, `evaluate`, `predict`, `table1`, `nsweep`,
//! `stats`); see the README for the full protocol against the real corpus.
//!
//! Determinism: every random choice (splits, weight init, epoch shuffles,
//! synthetic fixtures) derives from one master seed through the portable
//! generator in [`rng`], and floating-point summations run in fixed index
//! order, so identical inputs and seeds reproduce results bit for bit.

pub mod cli;
pub mod dataset;
pub mod experiment;
pub mod features;
pub mod linalg;
pub mod metrics;
pub mod nn;
pub mod rng;
pub mod synthetic;

pub use dataset::{Corpus, DesignMatrix, Record, SplitSpec};
pub use experiment::{CompressionStats, ExperimentConfig, ExperimentError, VariantReport, VariantSpec};
pub use features::{
    AlphabetCounts, FeatureError, FeatureVector, PreprocessConfig, StandardVector, VectorKind,
};
pub use metrics::{ConfusionMatrix, MetricsError, MetricsReport};
pub use nn::{MlpModel, NnError, OptimizerKind, TrainConfig, TrainHistory};
