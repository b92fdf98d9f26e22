//! Seeded synthetic fixtures for demos and tests.
//!
//! Real experiments ingest the two-file news corpus; these generators provide
//! stand-ins that exercise the same code paths without shipping data:
//! a linearly separable 26-dimensional blob set for sanity-checking the
//! trainer, and a two-class letter-soup corpus whose classes differ in letter
//! distribution (so frequency features genuinely separate them).

use std::io::Write;
use std::path::Path;

use crate::dataset::DesignMatrix;
use crate::features::{FeatureVector, StandardVector, VectorKind, ALPHABET_LEN};
use crate::rng::SplitMix64;

/// Two Gaussian blobs in 26 dimensions, labels alternating 0/1.
///
/// Class 0 is centered at -0.3 per component, class 1 at +0.3, both with
/// spread 0.1, so the classes are comfortably linearly separable.
pub fn two_blob_design_matrix(rows: usize, seed: u64) -> DesignMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut features = Vec::with_capacity(rows);
    let mut labels = Vec::with_capacity(rows);
    for i in 0..rows {
        let label = (i % 2) as u8;
        let center = if label == 0 { -0.3 } else { 0.3 };
        let mut components = [0.0f64; ALPHABET_LEN];
        for c in components.iter_mut() {
            *c = center + 0.1 * rng.next_gaussian();
        }
        features.push(FeatureVector::from_components(components, VectorKind::Raw));
        labels.push(label);
    }
    DesignMatrix {
        features,
        labels,
        ids: (0..rows).collect(),
        skipped_ids: Vec::new(),
    }
}

/// Letter distribution used for the synthetic "true" class: ordinary English
/// frequencies. The "fake" class mixes this with a uniform distribution, which
/// shifts every component enough for frequency features to pick up.
fn class_distribution(label: u8) -> [f64; ALPHABET_LEN] {
    let english = StandardVector::english().components();
    let mut dist = [0.0f64; ALPHABET_LEN];
    match label {
        1 => dist.copy_from_slice(english),
        _ => {
            let uniform = 1.0 / ALPHABET_LEN as f64;
            for (d, &e) in dist.iter_mut().zip(english.iter()) {
                *d = 0.55 * e + 0.45 * uniform;
            }
        }
    }
    dist
}

fn cumulative(dist: &[f64; ALPHABET_LEN]) -> [f64; ALPHABET_LEN] {
    let mut cdf = [0.0f64; ALPHABET_LEN];
    let mut acc = 0.0;
    for (c, &d) in cdf.iter_mut().zip(dist.iter()) {
        acc += d;
        *c = acc;
    }
    cdf[ALPHABET_LEN - 1] = 1.0;
    cdf
}

fn sample_letter(cdf: &[f64; ALPHABET_LEN], rng: &mut SplitMix64) -> char {
    let u = rng.next_f64();
    let idx = cdf.iter().position(|&c| u < c).unwrap_or(ALPHABET_LEN - 1);
    (b'a' + idx as u8) as char
}

fn synth_text(cdf: &[f64; ALPHABET_LEN], letters: usize, rng: &mut SplitMix64) -> String {
    let mut out = String::with_capacity(letters * 2);
    let mut in_word = 0usize;
    let mut word_len = 3 + rng.next_below(6) as usize;
    for i in 0..letters {
        out.push(sample_letter(cdf, rng));
        in_word += 1;
        if in_word == word_len && i + 1 < letters {
            // Occasional punctuation keeps the CSV quoting paths honest.
            match rng.next_below(12) {
                0 => out.push_str(", "),
                1 => out.push_str(". "),
                2 => out.push_str(" 7 "),
                _ => out.push(' '),
            }
            in_word = 0;
            word_len = 3 + rng.next_below(6) as usize;
        }
    }
    out
}

/// One synthetic class file as CSV text with the usual `title,text,subject,date`
/// header. Texts have 120-600 letters each.
pub fn synthetic_class_csv(label: u8, rows: usize, seed: u64) -> String {
    let cdf = cumulative(&class_distribution(label));
    let mut rng = SplitMix64::new(seed);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["title", "text", "subject", "date"])
        .expect("in-memory write");
    for i in 0..rows {
        let letters = 120 + rng.next_below(481) as usize;
        let title = synth_text(&cdf, 20 + rng.next_below(30) as usize, &mut rng);
        let text = synth_text(&cdf, letters, &mut rng);
        let subject = if label == 0 { "News" } else { "politicsNews" };
        writer
            .write_record([&title, &text, subject, &format!("2017-{:02}-01", 1 + i % 12)])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

/// Writes a fake/true CSV pair under `dir` and returns the two paths.
pub fn write_synthetic_corpus(
    dir: &Path,
    rows_per_class: usize,
    seed: u64,
) -> std::io::Result<(std::path::PathBuf, std::path::PathBuf)> {
    let fake_path = dir.join("Fake.csv");
    let true_path = dir.join("True.csv");
    let mut fake = std::fs::File::create(&fake_path)?;
    fake.write_all(synthetic_class_csv(0, rows_per_class, seed).as_bytes())?;
    let mut true_file = std::fs::File::create(&true_path)?;
    true_file.write_all(synthetic_class_csv(1, rows_per_class, seed ^ 0x5DEECE66D).as_bytes())?;
    Ok((fake_path, true_path))
}
