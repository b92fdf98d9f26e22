//! End-to-end checks of the `apvnet` binary: exit codes, output formats, and
//! the ingest -> featurize -> train -> evaluate -> predict flow on a small
//! synthetic corpus.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use apvnet::synthetic::write_synthetic_corpus;

fn apvnet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apvnet"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

struct Fixture {
    dir: tempfile::TempDir,
    fake: PathBuf,
    true_: PathBuf,
}

fn fixture(rows_per_class: usize) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let (fake, true_) = write_synthetic_corpus(dir.path(), rows_per_class, 31).unwrap();
    Fixture { dir, fake, true_ }
}

#[test]
fn unknown_subcommand_exits_1_with_synopsis_on_stderr() {
    let f = fixture(5);
    let out = apvnet(&["frobnicate"], f.dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("Usage"), "no synopsis in: {err}");
    assert!(stdout(&out).is_empty());
}

#[test]
fn help_and_version_exit_0() {
    let f = fixture(5);
    assert_eq!(apvnet(&["--help"], f.dir.path()).status.code(), Some(0));
    assert_eq!(apvnet(&["--version"], f.dir.path()).status.code(), Some(0));
    assert_eq!(apvnet(&["table1", "--help"], f.dir.path()).status.code(), Some(0));
}

#[test]
fn missing_input_file_exits_2() {
    let f = fixture(5);
    let out = apvnet(
        &["ingest", "--fake", "no-such.csv", "--true", "also-missing.csv"],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not found"));
}

#[test]
fn malformed_csv_exits_2() {
    let f = fixture(5);
    std::fs::write(f.dir.path().join("bad.csv"), "title,body\nx,y\n").unwrap();
    let out = apvnet(
        &["ingest", "--fake", "bad.csv", "--true", f.true_.to_str().unwrap()],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("text"));
}

#[test]
fn ingest_reports_row_counts() {
    let f = fixture(12);
    let out = apvnet(
        &[
            "ingest",
            "--fake",
            f.fake.to_str().unwrap(),
            "--true",
            f.true_.to_str().unwrap(),
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rows: 24 (fake 12, true 12)"));
}

#[test]
fn stats_prints_compression_summary() {
    let f = fixture(10);
    let out = apvnet(
        &[
            "stats",
            "--fake",
            f.fake.to_str().unwrap(),
            "--true",
            f.true_.to_str().unwrap(),
            "--json",
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["included"], 20);
    assert_eq!(parsed["excluded"], 0);
    assert!(parsed["mean_ratio"].as_f64().unwrap() < 0.3);
}

#[test]
fn featurize_train_evaluate_predict_flow() {
    let f = fixture(120);
    let data: &[&str] = &[
        "--fake",
        f.fake.to_str().unwrap(),
        "--true",
        f.true_.to_str().unwrap(),
    ];

    // featurize -> CSV with the documented header
    let mut featurize = vec!["featurize", "--n", "1", "--ssm", "--out", "features.csv"];
    featurize.extend_from_slice(data);
    let out = apvnet(&featurize, f.dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv_text = std::fs::read_to_string(f.dir.path().join("features.csv")).unwrap();
    assert!(csv_text.starts_with("id,label,f_a,"));
    assert_eq!(csv_text.lines().count(), 241);

    // train a small model on the same preprocessing
    let mut train = vec![
        "train",
        "--n",
        "1",
        "--ssm",
        "--train-size",
        "150",
        "--test-size",
        "60",
        "--epochs",
        "20",
        "--batch-size",
        "30",
        "--seed",
        "42",
        "--model-out",
        "model.apvnet",
        "--report",
        "train-report.json",
    ];
    train.extend_from_slice(data);
    let out = apvnet(&train, f.dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(f.dir.path().join("model.apvnet").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(f.dir.path().join("train-report.json")).unwrap())
            .unwrap();
    assert_eq!(report["epochs"], 20);
    assert_eq!(report["variant"], "1-SAPV, SSM");

    // evaluate the saved model against the exported features
    let out = apvnet(
        &[
            "evaluate",
            "--model",
            "model.apvnet",
            "--features",
            "features.csv",
            "--json",
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let metrics: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let accuracy = metrics["accuracy"].as_f64().unwrap();
    assert!(accuracy > 0.7, "synthetic classes should be separable, got {accuracy}");

    // predict a single text; preprocessing flags must match training
    let out = apvnet(
        &[
            "predict",
            "--model",
            "model.apvnet",
            "--n",
            "1",
            "--ssm",
            "--text",
            "The committee reviewed the report and published the findings on Tuesday.",
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let line = stdout(&out);
    assert!(
        line.starts_with("label=0 probability=") || line.starts_with("label=1 probability="),
        "unexpected predict output: {line}"
    );
}

#[test]
fn corrupt_model_file_exits_2() {
    let f = fixture(5);
    std::fs::write(f.dir.path().join("junk.apvnet"), b"not a model").unwrap();
    let out = apvnet(
        &["predict", "--model", "junk.apvnet", "--text", "hello"],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed model file"));
}

#[test]
fn table1_smoke_writes_reports_and_supports_resume() {
    let f = fixture(160);
    let args: Vec<&str> = vec![
        "table1",
        "--fake",
        f.fake.to_str().unwrap(),
        "--true",
        f.true_.to_str().unwrap(),
        "--out",
        "results",
        "--train-size",
        "200",
        "--test-size",
        "80",
        "--epochs",
        "3",
        "--batch-size",
        "40",
    ];
    let out = apvnet(&args, f.dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let results = f.dir.path().join("results");
    for name in ["apv.json", "apv-ssm.json", "1-sapv.json", "1-sapv-ssm.json", "table1.txt"] {
        assert!(results.join(name).exists(), "missing {name}");
    }
    assert!(stdout(&out).contains("1-SAPV, SSM"));

    // Rerunning with --resume keeps persisted reports untouched.
    let apv_json = results.join("apv.json");
    let tampered = std::fs::read_to_string(&apv_json)
        .unwrap()
        .replace("\"variant\": \"APV\"", "\"variant\": \"APV-tampered\"");
    std::fs::write(&apv_json, &tampered).unwrap();

    let mut resume_args = args.clone();
    resume_args.push("--resume");
    let out = apvnet(&resume_args, f.dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("resumed"));
    let after = std::fs::read_to_string(&apv_json).unwrap();
    assert!(after.contains("APV-tampered"), "resume recomputed the report");
}

#[test]
fn nsweep_smoke_writes_csv() {
    let f = fixture(120);
    let out = apvnet(
        &[
            "nsweep",
            "--fake",
            f.fake.to_str().unwrap(),
            "--true",
            f.true_.to_str().unwrap(),
            "--out",
            "sweep",
            "--n-values",
            "0,2",
            "--train-size",
            "150",
            "--test-size",
            "60",
            "--epochs",
            "2",
            "--batch-size",
            "30",
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv_text = std::fs::read_to_string(f.dir.path().join("sweep/nsweep.csv")).unwrap();
    assert!(csv_text.starts_with("n,accuracy,seconds,seed\n"));
    assert_eq!(csv_text.lines().count(), 3);
    assert!(f.dir.path().join("sweep/nsweep-n0.json").exists());
    assert!(f.dir.path().join("sweep/nsweep-n2.json").exists());
}

#[test]
fn config_file_supplies_flags_and_cli_overrides() {
    let f = fixture(120);
    std::fs::write(
        f.dir.path().join("run.conf"),
        format!(
            "# smoke settings\n\
             fake = {}\n\
             true = {}\n\
             out = conf-results\n\
             train_size = 150\n\
             test_size = 60\n\
             epochs = 50\n\
             batch_size = 30\n",
            f.fake.display(),
            f.true_.display()
        ),
    )
    .unwrap();

    // --epochs on the command line overrides the config file's 50.
    let out = apvnet(
        &["table1", "--config", "run.conf", "--epochs", "2"],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(f.dir.path().join("conf-results/apv.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["epochs"], 2);
    assert_eq!(report["train_size"], 150);
}

#[test]
fn bad_config_file_exits_1() {
    let f = fixture(5);
    std::fs::write(f.dir.path().join("broken.conf"), "this is not key value\n").unwrap();
    let out = apvnet(&["table1", "--config", "broken.conf"], f.dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = apvnet(&["table1", "--config", "missing.conf"], f.dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn evaluate_rejects_bad_threshold_as_usage_like_runtime_error() {
    let f = fixture(40);
    let mut featurize = vec!["featurize", "--out", "f.csv"];
    let data: &[&str] = &[
        "--fake",
        f.fake.to_str().unwrap(),
        "--true",
        f.true_.to_str().unwrap(),
    ];
    featurize.extend_from_slice(data);
    assert_eq!(apvnet(&featurize, f.dir.path()).status.code(), Some(0));

    let mut train = vec![
        "train", "--train-size", "40", "--test-size", "20", "--epochs", "1",
        "--batch-size", "10", "--model-out", "m.apvnet",
    ];
    train.extend_from_slice(data);
    assert_eq!(apvnet(&train, f.dir.path()).status.code(), Some(0));

    let out = apvnet(
        &[
            "evaluate", "--model", "m.apvnet", "--features", "f.csv", "--threshold", "1.5",
        ],
        f.dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("threshold"));
}
