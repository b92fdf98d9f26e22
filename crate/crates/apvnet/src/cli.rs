//! Command-line front end.
//!
//! Subcommands: `ingest`, `featurize`, `train`, `evaluate`, `predict`,
//! `table1`, `nsweep`, `stats`. Exit codes: 0 success, 1 usage error, 2 data
//! error (missing/malformed inputs), 3 runtime failure.
//!
//! Any subcommand accepts `--config FILE`, a `key = value` text file whose
//! keys mirror the long flag names (underscores and dashes both accepted).
//! Values from the file are inserted before the command-line flags, so
//! explicit flags win. Boolean keys take `true`/`false`; `false` simply omits
//! the flag.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::dataset::{self};
use crate::experiment::{
    self, compression_stats, run_nsweep, run_table1, train_single, ExperimentConfig,
    ExperimentError, VariantSpec,
};
use crate::features::{self, PreprocessConfig, StandardVector};
use crate::metrics;
use crate::nn::{MlpModel, OptimizerKind};

#[derive(Parser, Debug)]
#[command(
    name = "apvnet",
    version,
    about = "Letter-frequency features and a small dense network for two-class news classification",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the two-file corpus and print row counts
    Ingest(IngestArgs),
    /// Extract feature vectors and write them as CSV
    Featurize(FeaturizeArgs),
    /// Train one model on a seeded split and save it
    Train(TrainArgs),
    /// Evaluate a saved model against a featurized CSV
    Evaluate(EvaluateArgs),
    /// Classify a single text with a saved model
    Predict(PredictArgs),
    /// Train the four preprocessing variants on one shared split
    Table1(Table1Args),
    /// Sweep the supplement value N with standard subtraction on
    Nsweep(NsweepArgs),
    /// Report how much smaller the feature representation is than the text
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// CSV file with the fake-class rows (label 0)
    #[arg(long = "fake", value_name = "FILE")]
    fake: PathBuf,
    /// CSV file with the true-class rows (label 1)
    #[arg(long = "true", value_name = "FILE")]
    true_source: PathBuf,
}

#[derive(Args, Debug)]
struct PreprocessArgs {
    /// Pseudo-count for letters absent from a text (0 = plain APV)
    #[arg(long, default_value_t = 0)]
    n: u32,
    /// Subtract the standard English letter-frequency vector
    #[arg(long)]
    ssm: bool,
    /// Standard-vector file; defaults to the bundled English table
    #[arg(long, value_name = "FILE")]
    standard_vector: Option<PathBuf>,
    /// Count title letters along with the body text
    #[arg(long)]
    include_title: bool,
}

impl PreprocessArgs {
    fn load_standard_vector(&self) -> Result<StandardVector, ExperimentError> {
        load_standard_vector_from(self.standard_vector.as_deref())
    }

    fn preprocess_config(&self) -> Result<PreprocessConfig, ExperimentError> {
        Ok(PreprocessConfig {
            supplement_n: self.n,
            standard_subtraction: if self.ssm {
                Some(self.load_standard_vector()?)
            } else {
                None
            },
            include_title: self.include_title,
        })
    }
}

fn load_standard_vector_from(path: Option<&Path>) -> Result<StandardVector, ExperimentError> {
    match path {
        None => Ok(StandardVector::english().clone()),
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|_| ExperimentError::MissingInput(path.to_path_buf()))?;
            Ok(features::load_standard_vector(file)?)
        }
    }
}

#[derive(Args, Debug)]
struct SplitArgs {
    /// Master seed; every random choice in the run derives from it
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Rows in the training split
    #[arg(long, default_value_t = 30_000)]
    train_size: usize,
    /// Rows in the test split
    #[arg(long, default_value_t = 9_898)]
    test_size: usize,
    /// Take a seeded random subsample of this many rows before splitting
    #[arg(long, value_name = "ROWS")]
    subsample: Option<usize>,
    /// Preserve class proportions in the split instead of sampling uniformly
    #[arg(long)]
    stratified: bool,
    /// Drop feature-identical (anagram-equal) records before splitting
    #[arg(long)]
    dedup: bool,
}

#[derive(Args, Debug)]
struct HyperArgs {
    /// Training epochs (defaults: 600 for train/table1, 1000 for nsweep)
    #[arg(long)]
    epochs: Option<usize>,
    /// Rows per gradient update
    #[arg(long, default_value_t = 200)]
    batch_size: usize,
    /// Learning rate
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    /// Optimizer: adam or sgd
    #[arg(long, default_value = "adam")]
    optimizer: OptimizerKind,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Also report the row count after anagram-level deduplication
    #[arg(long)]
    dedup: bool,
}

#[derive(Args, Debug)]
struct FeaturizeArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    preprocess: PreprocessArgs,
    /// Output CSV path (`id,label,f_a,...,f_z`)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    preprocess: PreprocessArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Where to save the trained model
    #[arg(long, value_name = "FILE")]
    model_out: PathBuf,
    /// Optional JSON report of the run
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Saved model file
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Featurized CSV produced by `featurize`
    #[arg(long, value_name = "FILE")]
    features: PathBuf,
    /// Decision threshold on the class-1 probability
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Print the full-precision report as JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Saved model file
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Text to classify
    #[arg(long)]
    text: String,
    #[command(flatten)]
    preprocess: PreprocessArgs,
    /// Decision threshold on the class-1 probability
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Directory for the per-variant reports and the combined table
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Keep persisted variant reports instead of recomputing them
    #[arg(long)]
    resume: bool,
    /// Count title letters along with the body text
    #[arg(long)]
    include_title: bool,
    /// Standard-vector file; defaults to the bundled English table
    #[arg(long, value_name = "FILE")]
    standard_vector: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NsweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Comma-separated supplement values to sweep
    #[arg(long, default_value = "0,1,2,3,4,5")]
    n_values: NValues,
    /// Directory for the per-N reports and nsweep.csv
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Keep persisted reports instead of recomputing them
    #[arg(long)]
    resume: bool,
    /// Count title letters along with the body text
    #[arg(long)]
    include_title: bool,
    /// Standard-vector file; defaults to the bundled English table
    #[arg(long, value_name = "FILE")]
    standard_vector: Option<PathBuf>,
}

/// Comma-separated list of N values; a plain type so that a later
/// `--n-values` (e.g. from the command line after a config file) replaces an
/// earlier one instead of appending.
#[derive(Debug, Clone, PartialEq, Eq)]
struct NValues(Vec<u32>);

impl std::str::FromStr for NValues {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("invalid N value {part:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(NValues)
    }
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Print the statistics as JSON
    #[arg(long)]
    json: bool,
}

/// Entry point used by the binary; returns the process exit code.
pub fn cli_main<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let argv = match expand_config_args(argv) {
        Ok(argv) => argv,
        Err(message) => {
            eprintln!("error: {message}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Replaces `--config FILE` with the flags read from FILE, inserted right
/// after the subcommand so later command-line flags override them.
fn expand_config_args(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut config_path: Option<PathBuf> = None;
    let mut rest: Vec<String> = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| "--config needs a file argument".to_string())?;
            config_path = Some(PathBuf::from(path));
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config_path = Some(PathBuf::from(path));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config_path else {
        return Ok(rest);
    };
    if rest.len() < 2 {
        return Err("--config requires a subcommand".to_string());
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    let mut expanded: Vec<String> = rest[..2].to_vec();
    expanded.extend(parse_config_file(&text)?);
    expanded.extend(rest[2..].iter().cloned());
    Ok(expanded)
}

fn parse_config_file(text: &str) -> Result<Vec<String>, String> {
    let mut flags = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", line_no + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(format!("config line {}: empty key or value", line_no + 1));
        }
        match value {
            "true" => flags.push(format!("--{key}")),
            "false" => {}
            _ => {
                flags.push(format!("--{key}"));
                flags.push(value.to_string());
            }
        }
    }
    Ok(flags)
}

fn open_corpus(data: &DataArgs) -> Result<dataset::Corpus, ExperimentError> {
    for path in [&data.fake, &data.true_source] {
        if !path.is_file() {
            return Err(ExperimentError::MissingInput(path.clone()));
        }
    }
    let fake = fs::File::open(&data.fake)?;
    let true_ = fs::File::open(&data.true_source)?;
    Ok(dataset::load_corpus(
        std::io::BufReader::new(fake),
        std::io::BufReader::new(true_),
    )?)
}

fn build_config(
    data: &DataArgs,
    split: &SplitArgs,
    hyper: &HyperArgs,
    out_dir: PathBuf,
    resume: bool,
    include_title: bool,
    standard_vector: Option<&Path>,
    default_epochs: usize,
) -> Result<ExperimentConfig, ExperimentError> {
    let mut config = ExperimentConfig::new(data.fake.clone(), data.true_source.clone(), out_dir);
    config.master_seed = split.seed;
    config.train_size = split.train_size;
    config.test_size = split.test_size;
    config.subsample = split.subsample;
    config.stratified = split.stratified;
    config.dedup = split.dedup;
    config.epochs = hyper.epochs.unwrap_or(default_epochs);
    config.batch_size = hyper.batch_size;
    config.learning_rate = hyper.lr;
    config.optimizer = hyper.optimizer;
    config.include_title = include_title;
    config.standard_vector = load_standard_vector_from(standard_vector)?;
    config.resume = resume;
    Ok(config)
}

fn run(command: Command) -> Result<(), ExperimentError> {
    match command {
        Command::Ingest(args) => {
            let corpus = open_corpus(&args.data)?;
            let [fake, true_] = corpus.label_counts();
            println!("rows: {} (fake {fake}, true {true_})", corpus.len());
            if args.dedup {
                let deduped = dataset::dedup_by_vector(&corpus, &PreprocessConfig::apv());
                println!(
                    "after dedup: {} rows ({} removed)",
                    deduped.len(),
                    corpus.len() - deduped.len()
                );
            }
            Ok(())
        }
        Command::Featurize(args) => {
            let corpus = open_corpus(&args.data)?;
            let config = args.preprocess.preprocess_config()?;
            let matrix = dataset::featurize_corpus(&corpus, &config);
            let file = fs::File::create(&args.out)?;
            dataset::export_design_matrix(&matrix, std::io::BufWriter::new(file))?;
            println!(
                "wrote {} rows to {} ({} skipped)",
                matrix.len(),
                args.out.display(),
                matrix.skipped_ids.len()
            );
            Ok(())
        }
        Command::Train(args) => {
            let config = build_config(
                &args.data,
                &args.split,
                &args.hyper,
                PathBuf::new(),
                false,
                args.preprocess.include_title,
                args.preprocess.standard_vector.as_deref(),
                600,
            )?;
            let variant = VariantSpec {
                supplement_n: args.preprocess.n,
                ssm: args.preprocess.ssm,
            };
            let (report, model) = train_single(&config, variant)?;
            model.save_to_path(&args.model_out)?;
            println!("model saved to {}", args.model_out.display());
            print!(
                "{}",
                metrics::format_table(&[(variant.label(), report.metrics.clone())])
            );
            if let Some(path) = &args.report {
                experiment::write_report(&report, path)?;
                println!("report written to {}", path.display());
            }
            Ok(())
        }
        Command::Evaluate(args) => {
            let model = MlpModel::load_from_path(&args.model)?;
            if !args.features.is_file() {
                return Err(ExperimentError::MissingInput(args.features.clone()));
            }
            let matrix = dataset::import_design_matrix(fs::File::open(&args.features)?)?;
            let predictions = model.predict_batch(&matrix.inputs(), args.threshold)?;
            let confusion = metrics::confusion(&predictions, &matrix.labels)?;
            let report = metrics::report(&confusion)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!(
                    "{}",
                    metrics::format_table(&[("evaluate".to_string(), report)])
                );
            }
            Ok(())
        }
        Command::Predict(args) => {
            let model = MlpModel::load_from_path(&args.model)?;
            let config = args.preprocess.preprocess_config()?;
            let feature = features::extract(&args.text, &config)?;
            let probability = model.predict_proba(feature.components())?;
            if !(0.0..=1.0).contains(&args.threshold) {
                return Err(ExperimentError::Nn(crate::nn::NnError::BadThreshold));
            }
            let label = u8::from(probability >= args.threshold);
            println!("label={label} probability={probability:.6}");
            Ok(())
        }
        Command::Table1(args) => {
            let config = build_config(
                &args.data,
                &args.split,
                &args.hyper,
                args.out.clone(),
                args.resume,
                args.include_title,
                args.standard_vector.as_deref(),
                600,
            )?;
            let results = run_table1(&config, |line| println!("{line}"))?;
            let rows: Vec<(String, metrics::MetricsReport)> = results
                .iter()
                .map(|(v, r)| (v.label(), r.metrics.clone()))
                .collect();
            print!("{}", metrics::format_table(&rows));
            println!("reports written to {}", config.out_dir.display());
            Ok(())
        }
        Command::Nsweep(args) => {
            let config = build_config(
                &args.data,
                &args.split,
                &args.hyper,
                args.out.clone(),
                args.resume,
                args.include_title,
                args.standard_vector.as_deref(),
                1000,
            )?;
            let entries = run_nsweep(&config, &args.n_values.0, |line| println!("{line}"))?;
            for e in &entries {
                println!("N={} accuracy={:.4}", e.n, e.accuracy);
            }
            println!("sweep written to {}", config.out_dir.join("nsweep.csv").display());
            Ok(())
        }
        Command::Stats(args) => {
            let corpus = open_corpus(&args.data)?;
            let stats = compression_stats(&corpus)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&stats).expect("serializable"));
            } else {
                println!(
                    "records: {} (included {}, excluded {})",
                    stats.included + stats.excluded,
                    stats.included,
                    stats.excluded
                );
                match (stats.mean_text_length, stats.mean_ratio) {
                    (Some(len), Some(ratio)) => {
                        println!("mean_text_length: {len:.1}");
                        println!("mean_ratio: {ratio:.6}");
                    }
                    _ => println!("means undefined: no records with letters"),
                }
            }
            Ok(())
        }
    }
}
