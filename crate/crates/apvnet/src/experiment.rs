//! Experiment runners: the four-variant comparison table, the N-sweep, and
//! the compression statistic, with machine-readable reports.
//!
//! A run is controlled by one master seed. All four preprocessing variants of
//! a table run consume the identical train/test split (verified by a SHA-256
//! digest of the selected record ids embedded in every report), and every
//! report echoes its full resolved configuration, so any row of an output
//! table can be reproduced from its report alone.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dataset::{self, Corpus, DatasetError, SplitSpec};
use crate::features::{FeatureError, PreprocessConfig, StandardVector};
use crate::metrics::{self, MetricsError, MetricsReport};
use crate::nn::{self, NnError, OptimizerKind, TrainConfig};
use crate::rng::derive_seed;

/// Fixed sub-seed streams derived from the master seed (see
/// [`crate::rng::derive_seed`]).
pub mod seeds {
    pub const SUBSAMPLE: u64 = 0;
    pub const SPLIT: u64 = 1;
    pub const INIT: u64 = 2;
    pub const SHUFFLE: u64 = 3;
}

pub const REPORT_FORMAT: &str = "apvnet-report-v1";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("input file not found: {0}")]
    MissingInput(PathBuf),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("io failure: {0}")]
    Io(#[from] io::Error),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl ExperimentError {
    /// Process exit code category: 2 for data problems, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::MissingInput(_)
            | ExperimentError::Dataset(_)
            | ExperimentError::Feature(_)
            | ExperimentError::EmptyCorpus
            | ExperimentError::InvalidConfig(_)
            | ExperimentError::Nn(NnError::MalformedModelFile(_))
            | ExperimentError::Nn(NnError::UnsupportedVersion(_)) => 2,
            ExperimentError::Nn(_) | ExperimentError::Metrics(_) | ExperimentError::Io(_) => 3,
        }
    }
}

/// Everything a table or sweep run needs, resolved up front.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub fake_path: PathBuf,
    pub true_path: PathBuf,
    pub out_dir: PathBuf,
    pub master_seed: u64,
    pub train_size: usize,
    pub test_size: usize,
    /// Optional seeded subsample taken before splitting (smoke runs).
    pub subsample: Option<usize>,
    /// Preserve class proportions in the split (off in the standard protocol).
    pub stratified: bool,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub include_title: bool,
    /// Drop feature-identical records before splitting (off in the standard
    /// protocol; anagram-level dedup uses the plain frequency vector).
    pub dedup: bool,
    pub standard_vector: StandardVector,
    /// Reuse persisted variant reports instead of recomputing them.
    pub resume: bool,
}

impl ExperimentConfig {
    pub fn new(fake_path: PathBuf, true_path: PathBuf, out_dir: PathBuf) -> Self {
        Self {
            fake_path,
            true_path,
            out_dir,
            master_seed: 42,
            train_size: 30_000,
            test_size: 9_898,
            subsample: None,
            stratified: false,
            epochs: 600,
            batch_size: 200,
            learning_rate: 1e-3,
            optimizer: OptimizerKind::Adam,
            include_title: false,
            dedup: false,
            standard_vector: StandardVector::english().clone(),
            resume: false,
        }
    }

    fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            batch_size: self.batch_size,
            learning_rate: self.learning_rate,
            optimizer: self.optimizer,
            seed: derive_seed(self.master_seed, seeds::SHUFFLE),
            shuffle_each_epoch: true,
        }
    }
}

/// One preprocessing variant of the comparison grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariantSpec {
    pub supplement_n: u32,
    pub ssm: bool,
}

impl VariantSpec {
    /// Display name matching the experiment write-ups.
    pub fn label(&self) -> String {
        match (self.supplement_n, self.ssm) {
            (0, false) => "APV".to_string(),
            (0, true) => "APV, SSM".to_string(),
            (n, false) => format!("{n}-SAPV"),
            (n, true) => format!("{n}-SAPV, SSM"),
        }
    }

    /// File-name-safe identifier.
    pub fn slug(&self) -> String {
        match (self.supplement_n, self.ssm) {
            (0, false) => "apv".to_string(),
            (0, true) => "apv-ssm".to_string(),
            (n, false) => format!("{n}-sapv"),
            (n, true) => format!("{n}-sapv-ssm"),
        }
    }

    pub fn preprocess(&self, config: &ExperimentConfig) -> PreprocessConfig {
        PreprocessConfig {
            supplement_n: self.supplement_n,
            standard_subtraction: self.ssm.then(|| config.standard_vector.clone()),
            include_title: config.include_title,
        }
    }
}

/// The four variants of the comparison table: APV, APV+SSM, 1-SAPV, 1-SAPV+SSM.
pub const TABLE1_VARIANTS: [VariantSpec; 4] = [
    VariantSpec { supplement_n: 0, ssm: false },
    VariantSpec { supplement_n: 0, ssm: true },
    VariantSpec { supplement_n: 1, ssm: false },
    VariantSpec { supplement_n: 1, ssm: true },
];

/// Machine-readable result of one trained variant. Deliberately contains no
/// wall-clock values: identical inputs and seeds serialize byte-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub format: String,
    pub variant: String,
    pub supplement_n: u32,
    pub ssm: bool,
    pub include_title: bool,
    pub dedup: bool,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub master_seed: u64,
    pub split_seed: u64,
    pub init_seed: u64,
    pub shuffle_seed: u64,
    pub subsample: Option<usize>,
    pub stratified: bool,
    pub train_size: usize,
    pub test_size: usize,
    /// SHA-256 over the selected train/test record ids; equal digests mean
    /// equal splits.
    pub split_digest: String,
    pub train_rows_used: usize,
    pub test_rows_used: usize,
    pub train_skipped_ids: Vec<usize>,
    pub test_skipped_ids: Vec<usize>,
    pub final_train_loss: f64,
    pub epoch_loss: Vec<f64>,
    pub metrics: MetricsReport,
    pub crate_version: String,
    /// Source revision the binary was built from, when the build set
    /// `APVNET_BUILD_COMMIT`.
    pub commit: Option<String>,
}

/// One entry of an N-sweep. `seconds` is the wall-clock training time in this
/// process (0 when the report was resumed from disk) and is the only
/// nondeterministic field.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub n: u32,
    pub accuracy: f64,
    pub seconds: f64,
    pub seed: u64,
    pub report: VariantReport,
}

#[derive(Debug, Clone)]
struct PreparedSplit {
    train: Corpus,
    test: Corpus,
    split_digest: String,
}

fn require_file(path: &Path) -> Result<(), ExperimentError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(ExperimentError::MissingInput(path.to_path_buf()))
    }
}

fn ids_digest(train: &Corpus, test: &Corpus) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"train:");
    for id in train.ids() {
        hasher.update(id.to_le_bytes());
    }
    hasher.update(b"test:");
    for id in test.ids() {
        hasher.update(id.to_le_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn prepare_split(config: &ExperimentConfig) -> Result<PreparedSplit, ExperimentError> {
    require_file(&config.fake_path)?;
    require_file(&config.true_path)?;
    let fake = fs::File::open(&config.fake_path)?;
    let true_ = fs::File::open(&config.true_path)?;
    let mut corpus = dataset::load_corpus(io::BufReader::new(fake), io::BufReader::new(true_))?;

    if config.dedup {
        corpus = dataset::dedup_by_vector(&corpus, &PreprocessConfig::apv());
    }
    if let Some(k) = config.subsample {
        corpus = dataset::subsample(&corpus, k, derive_seed(config.master_seed, seeds::SUBSAMPLE))?;
    }
    let spec = SplitSpec {
        train_size: config.train_size,
        test_size: config.test_size,
        seed: derive_seed(config.master_seed, seeds::SPLIT),
        stratified: config.stratified,
    };
    let (train, test) = dataset::split(&corpus, &spec)?;
    let split_digest = ids_digest(&train, &test);
    Ok(PreparedSplit {
        train,
        test,
        split_digest,
    })
}

fn run_variant(
    config: &ExperimentConfig,
    prepared: &PreparedSplit,
    variant: VariantSpec,
) -> Result<(VariantReport, nn::MlpModel), ExperimentError> {
    let preprocess = variant.preprocess(config);
    let train_matrix = dataset::featurize_corpus(&prepared.train, &preprocess);
    let test_matrix = dataset::featurize_corpus(&prepared.test, &preprocess);
    if train_matrix.is_empty() || test_matrix.is_empty() {
        return Err(ExperimentError::EmptyCorpus);
    }

    let init_seed = derive_seed(config.master_seed, seeds::INIT);
    let (model, history) = nn::train(&train_matrix, &config.train_config(), init_seed)?;

    let predictions = model.predict_batch(&test_matrix.inputs(), 0.5)?;
    let confusion = metrics::confusion(&predictions, &test_matrix.labels)?;
    let report = metrics::report(&confusion)?;

    let variant_report = VariantReport {
        format: REPORT_FORMAT.to_string(),
        variant: variant.label(),
        supplement_n: variant.supplement_n,
        ssm: variant.ssm,
        include_title: config.include_title,
        dedup: config.dedup,
        epochs: config.epochs,
        batch_size: config.batch_size,
        learning_rate: config.learning_rate,
        optimizer: config.optimizer,
        master_seed: config.master_seed,
        split_seed: derive_seed(config.master_seed, seeds::SPLIT),
        init_seed,
        shuffle_seed: derive_seed(config.master_seed, seeds::SHUFFLE),
        subsample: config.subsample,
        stratified: config.stratified,
        train_size: config.train_size,
        test_size: config.test_size,
        split_digest: prepared.split_digest.clone(),
        train_rows_used: train_matrix.len(),
        test_rows_used: test_matrix.len(),
        train_skipped_ids: train_matrix.skipped_ids.clone(),
        test_skipped_ids: test_matrix.skipped_ids.clone(),
        final_train_loss: *history.epoch_loss.last().unwrap_or(&f64::NAN),
        epoch_loss: history.epoch_loss.clone(),
        metrics: report,
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        commit: option_env!("APVNET_BUILD_COMMIT").map(str::to_string),
    };
    Ok((variant_report, model))
}

/// Prepares the shared split and trains one variant, returning both the
/// report and the trained model (for callers that persist the model).
pub fn train_single(
    config: &ExperimentConfig,
    variant: VariantSpec,
) -> Result<(VariantReport, nn::MlpModel), ExperimentError> {
    let prepared = prepare_split(config)?;
    run_variant(config, &prepared, variant)
}

/// Serializes `report` to `path` atomically (write to a temp file, then rename).
pub fn write_report(report: &VariantReport, path: &Path) -> Result<(), ExperimentError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| ExperimentError::Io(io::Error::other(e)))?;
    write_atomic(path, format!("{json}\n").as_bytes())?;
    Ok(())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn load_persisted_report(path: &Path) -> Option<VariantReport> {
    let text = fs::read_to_string(path).ok()?;
    let report: VariantReport = serde_json::from_str(&text).ok()?;
    (report.format == REPORT_FORMAT).then_some(report)
}

fn run_or_resume(
    config: &ExperimentConfig,
    prepared: &PreparedSplit,
    variant: VariantSpec,
    path: &Path,
) -> Result<(VariantReport, f64, bool), ExperimentError> {
    if config.resume {
        if let Some(report) = load_persisted_report(path) {
            return Ok((report, 0.0, true));
        }
    }
    let started = Instant::now();
    let (report, _model) = run_variant(config, prepared, variant)?;
    let seconds = started.elapsed().as_secs_f64();
    write_report(&report, path)?;
    Ok((report, seconds, false))
}

/// Runs the four comparison variants on one shared split, persisting each
/// report as it completes plus a combined text table (`table1.txt`).
///
/// A `progress` callback receives one line per finished variant.
pub fn run_table1(
    config: &ExperimentConfig,
    mut progress: impl FnMut(&str),
) -> Result<Vec<(VariantSpec, VariantReport)>, ExperimentError> {
    fs::create_dir_all(&config.out_dir)?;
    let prepared = prepare_split(config)?;
    let mut results = Vec::with_capacity(TABLE1_VARIANTS.len());
    for variant in TABLE1_VARIANTS {
        let path = config.out_dir.join(format!("{}.json", variant.slug()));
        let (report, seconds, resumed) = run_or_resume(config, &prepared, variant, &path)?;
        progress(&format!(
            "{:<12} accuracy {:.4} ({})",
            variant.label(),
            report.metrics.accuracy,
            if resumed {
                "resumed".to_string()
            } else {
                format!("{seconds:.1}s")
            }
        ));
        results.push((variant, report));
    }

    let rows: Vec<(String, MetricsReport)> = results
        .iter()
        .map(|(v, r)| (v.label(), r.metrics.clone()))
        .collect();
    write_atomic(
        &config.out_dir.join("table1.txt"),
        metrics::format_table(&rows).as_bytes(),
    )?;
    Ok(results)
}

/// Runs the N-sweep (N-SAPV with standard subtraction for each requested N)
/// on one shared split and writes `nsweep.csv` with `n,accuracy,seconds,seed`
/// plus one report per N.
pub fn run_nsweep(
    config: &ExperimentConfig,
    n_values: &[u32],
    mut progress: impl FnMut(&str),
) -> Result<Vec<SweepEntry>, ExperimentError> {
    if n_values.is_empty() {
        return Err(ExperimentError::InvalidConfig(
            "the N-sweep needs at least one N value".into(),
        ));
    }
    fs::create_dir_all(&config.out_dir)?;
    let prepared = prepare_split(config)?;
    let mut entries = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let variant = VariantSpec {
            supplement_n: n,
            ssm: true,
        };
        let path = config.out_dir.join(format!("nsweep-n{n}.json"));
        let (report, seconds, resumed) = run_or_resume(config, &prepared, variant, &path)?;
        progress(&format!(
            "N={n}: accuracy {:.4} ({})",
            report.metrics.accuracy,
            if resumed {
                "resumed".to_string()
            } else {
                format!("{seconds:.1}s")
            }
        ));
        entries.push(SweepEntry {
            n,
            accuracy: report.metrics.accuracy,
            seconds,
            seed: config.master_seed,
            report,
        });
    }

    let mut csv_text = String::from("n,accuracy,seconds,seed\n");
    for e in &entries {
        csv_text.push_str(&format!(
            "{},{:.6},{:.3},{}\n",
            e.n, e.accuracy, e.seconds, e.seed
        ));
    }
    write_atomic(&config.out_dir.join("nsweep.csv"), csv_text.as_bytes())?;
    Ok(entries)
}

/// Size statistics of the frequency representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionStats {
    /// Mean letter count of records with at least one letter.
    pub mean_text_length: Option<f64>,
    /// Mean of `26 / letter count` over the same records.
    pub mean_ratio: Option<f64>,
    pub included: usize,
    /// Records with zero letters, excluded from both means.
    pub excluded: usize,
}

/// Per record the 26-component vector replaces `n` letters of text, a ratio
/// of `26 / n`. Records with zero letters are excluded and counted separately.
pub fn compression_stats(corpus: &Corpus) -> Result<CompressionStats, ExperimentError> {
    if corpus.is_empty() {
        return Err(ExperimentError::EmptyCorpus);
    }
    let mut included = 0usize;
    let mut excluded = 0usize;
    let mut length_sum = 0.0;
    let mut ratio_sum = 0.0;
    for record in &corpus.records {
        let letters = crate::features::count_letters(&record.text).total();
        if letters == 0 {
            excluded += 1;
        } else {
            included += 1;
            length_sum += letters as f64;
            ratio_sum += 26.0 / letters as f64;
        }
    }
    let means = (included > 0).then(|| (length_sum / included as f64, ratio_sum / included as f64));
    Ok(CompressionStats {
        mean_text_length: means.map(|m| m.0),
        mean_ratio: means.map(|m| m.1),
        included,
        excluded,
    })
}
