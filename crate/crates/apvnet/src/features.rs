//! Letter-frequency feature extraction.
//!
//! A text is reduced to a 26-dimensional vector of letter probabilities: count
//! the occurrences of each ASCII letter (case-insensitive, everything else
//! ignored), then normalize by the total count. Two refinements are supported:
//!
//! - **N-supplementation**: letters absent from the text receive a pseudo-count
//!   of `N` before normalization, so no component is ever zero (and empty texts
//!   become representable for `N >= 1`).
//! - **Standard subtraction**: a reference English letter-frequency vector is
//!   subtracted componentwise, turning the features into deviations from
//!   ordinary English.
//!
//! All functions here are pure; identical inputs give bit-identical outputs.

use std::io::{BufRead, BufReader, Read};
use std::sync::OnceLock;

use thiserror::Error;

/// Number of tracked letters (`a..=z`).
pub const ALPHABET_LEN: usize = 26;

/// Contents of the standard-vector file shipped with the crate
/// (`data/standard_vector_en.csv`).
pub const DEFAULT_STANDARD_VECTOR_FILE: &str = include_str!("../data/standard_vector_en.csv");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeatureError {
    /// The text contains no letters, so frequencies cannot be normalized.
    #[error("text contains no letters to normalize")]
    EmptyText,
    /// Standard subtraction was applied to a vector that is already shifted.
    #[error("standard subtraction requires a raw probability vector")]
    KindMismatch,
    #[error("malformed standard-vector data: {0}")]
    MalformedStandardVector(String),
}

/// Raw letter counts for one text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetCounts {
    counts: [u64; ALPHABET_LEN],
    total: u64,
}

impl AlphabetCounts {
    pub fn counts(&self) -> &[u64; ALPHABET_LEN] {
        &self.counts
    }

    /// Sum of all 26 counts.
    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Whether a vector still sums to one or has had the standard vector subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorKind {
    /// Letter probabilities; components sum to 1.
    Raw,
    /// Difference of two probability vectors; components sum to 0.
    Ssm,
}

/// A 26-component feature vector in `a..=z` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    components: [f64; ALPHABET_LEN],
    kind: VectorKind,
}

impl FeatureVector {
    /// Wraps precomputed components, e.g. rows read back from a feature CSV or
    /// synthetic inputs. The probability invariants only hold for vectors
    /// produced by the extraction functions in this module.
    pub fn from_components(components: [f64; ALPHABET_LEN], kind: VectorKind) -> Self {
        Self { components, kind }
    }

    pub fn components(&self) -> &[f64; ALPHABET_LEN] {
        &self.components
    }

    pub fn kind(&self) -> VectorKind {
        self.kind
    }

    /// Exact componentwise equality, including the kind tag.
    pub fn bits_eq(&self, other: &FeatureVector) -> bool {
        self.kind == other.kind
            && self
                .components
                .iter()
                .zip(other.components.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Unit-normalized reference letter frequencies of common English text.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardVector {
    components: [f64; ALPHABET_LEN],
}

impl StandardVector {
    pub fn components(&self) -> &[f64; ALPHABET_LEN] {
        &self.components
    }

    /// The bundled English standard vector, parsed once.
    pub fn english() -> &'static StandardVector {
        static ENGLISH: OnceLock<StandardVector> = OnceLock::new();
        ENGLISH.get_or_init(|| {
            load_standard_vector(DEFAULT_STANDARD_VECTOR_FILE.as_bytes())
                .expect("bundled standard vector must parse")
        })
    }
}

/// How texts are turned into feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessConfig {
    /// Pseudo-count given to letters absent from the text; 0 means plain APV.
    pub supplement_n: u32,
    /// When set, the standard vector is subtracted after normalization.
    pub standard_subtraction: Option<StandardVector>,
    /// Count letters of the title as well as the body text.
    pub include_title: bool,
}

impl PreprocessConfig {
    /// Plain APV on the body text: no supplementation, no subtraction.
    pub fn apv() -> Self {
        Self {
            supplement_n: 0,
            standard_subtraction: None,
            include_title: false,
        }
    }

    /// Convenience constructor for the (N, subtraction on/off) grid.
    pub fn variant(supplement_n: u32, ssm: bool) -> Self {
        Self {
            supplement_n,
            standard_subtraction: ssm.then(|| StandardVector::english().clone()),
            include_title: false,
        }
    }
}

fn letter_index(byte: u8) -> Option<usize> {
    match byte {
        b'a'..=b'z' => Some((byte - b'a') as usize),
        b'A'..=b'Z' => Some((byte - b'A') as usize),
        _ => None,
    }
}

/// Counts ASCII letters case-insensitively; every other character is ignored.
///
/// Iterating bytes is safe on UTF-8 input because multi-byte sequences never
/// contain bytes in the ASCII letter range.
pub fn count_letters(text: &str) -> AlphabetCounts {
    let mut counts = [0u64; ALPHABET_LEN];
    for byte in text.bytes() {
        if let Some(idx) = letter_index(byte) {
            counts[idx] += 1;
        }
    }
    let total = counts.iter().sum();
    AlphabetCounts { counts, total }
}

/// Normalizes counts into letter probabilities: component `k` is
/// `counts[k] / total`.
pub fn to_apv(counts: &AlphabetCounts) -> Result<FeatureVector, FeatureError> {
    to_n_sapv(counts, 0)
}

/// N-supplied variant: letters with zero count are given pseudo-count `n`
/// before normalization. With `n = 0` this is exactly [`to_apv`].
pub fn to_n_sapv(counts: &AlphabetCounts, n: u32) -> Result<FeatureVector, FeatureError> {
    let supplement = u64::from(n);
    let mut effective = [0u64; ALPHABET_LEN];
    let mut sum = 0u64;
    for (eff, &count) in effective.iter_mut().zip(counts.counts.iter()) {
        *eff = if count > 0 { count } else { supplement };
        sum += *eff;
    }
    if sum == 0 {
        return Err(FeatureError::EmptyText);
    }
    let denom = sum as f64;
    let mut components = [0.0; ALPHABET_LEN];
    for (comp, &eff) in components.iter_mut().zip(effective.iter()) {
        *comp = eff as f64 / denom;
    }
    Ok(FeatureVector {
        components,
        kind: VectorKind::Raw,
    })
}

/// Subtracts the standard vector componentwise. Only defined on raw
/// probability vectors; the result sums to zero.
pub fn apply_ssm(v: &FeatureVector, v0: &StandardVector) -> Result<FeatureVector, FeatureError> {
    if v.kind != VectorKind::Raw {
        return Err(FeatureError::KindMismatch);
    }
    let mut components = [0.0; ALPHABET_LEN];
    for ((out, &a), &b) in components.iter_mut().zip(v.components.iter()).zip(v0.components.iter())
    {
        *out = a - b;
    }
    Ok(FeatureVector {
        components,
        kind: VectorKind::Ssm,
    })
}

/// Parses a standard-vector file: 26 `letter,value` lines (any order, no
/// duplicates), `#` comments and blank lines allowed. Values may be percent or
/// fraction; they are renormalized to sum to 1.
pub fn load_standard_vector<R: Read>(source: R) -> Result<StandardVector, FeatureError> {
    let reader = BufReader::new(source);
    let mut raw: [Option<f64>; ALPHABET_LEN] = [None; ALPHABET_LEN];
    let mut seen = 0usize;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| {
            FeatureError::MalformedStandardVector(format!("read failure: {e}"))
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (letter_part, value_part) = trimmed.split_once(',').ok_or_else(|| {
            FeatureError::MalformedStandardVector(format!(
                "line {}: expected `letter,value`, got {trimmed:?}",
                line_no + 1
            ))
        })?;
        let letter = letter_part.trim();
        let mut chars = letter.chars();
        let idx = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => {
                (c.to_ascii_lowercase() as u8 - b'a') as usize
            }
            _ => {
                return Err(FeatureError::MalformedStandardVector(format!(
                    "line {}: {letter:?} is not a letter a-z",
                    line_no + 1
                )))
            }
        };
        if raw[idx].is_some() {
            return Err(FeatureError::MalformedStandardVector(format!(
                "line {}: duplicate entry for {letter:?}",
                line_no + 1
            )));
        }
        let value: f64 = value_part.trim().parse().map_err(|_| {
            FeatureError::MalformedStandardVector(format!(
                "line {}: cannot parse value {value_part:?}",
                line_no + 1
            ))
        })?;
        if !value.is_finite() || value <= 0.0 {
            return Err(FeatureError::MalformedStandardVector(format!(
                "line {}: value for {letter:?} must be a positive finite number",
                line_no + 1
            )));
        }
        raw[idx] = Some(value);
        seen += 1;
    }

    if seen != ALPHABET_LEN {
        return Err(FeatureError::MalformedStandardVector(format!(
            "expected {ALPHABET_LEN} letter entries, got {seen}"
        )));
    }

    let mut components = [0.0; ALPHABET_LEN];
    for (out, value) in components.iter_mut().zip(raw.iter()) {
        *out = value.expect("all entries present");
    }
    let sum: f64 = components.iter().sum();
    for c in components.iter_mut() {
        *c /= sum;
    }
    Ok(StandardVector { components })
}

/// Full pipeline for one text: count, supplement, normalize, optionally
/// subtract the standard vector.
pub fn extract(text: &str, config: &PreprocessConfig) -> Result<FeatureVector, FeatureError> {
    let counts = count_letters(text);
    let v = to_n_sapv(&counts, config.supplement_n)?;
    match &config.standard_subtraction {
        Some(v0) => apply_ssm(&v, v0),
        None => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts_of(text: &str) -> AlphabetCounts {
        count_letters(text)
    }

    #[test]
    fn count_letters_direct() {
        let c = counts_of("abc");
        assert_eq!(c.counts()[0], 1);
        assert_eq!(c.counts()[1], 1);
        assert_eq!(c.counts()[2], 1);
        assert_eq!(c.counts()[3..].iter().sum::<u64>(), 0);
        assert_eq!(c.total(), 3);
    }

    #[test]
    fn count_letters_empty() {
        let c = counts_of("");
        assert_eq!(c.counts().iter().sum::<u64>(), 0);
        assert_eq!(c.total(), 0);
    }

    #[test]
    fn count_letters_case_folds_and_filters() {
        let c = counts_of("AaB-b! 2");
        assert_eq!(c.counts()[0], 2);
        assert_eq!(c.counts()[1], 2);
        assert_eq!(c.counts()[2..].iter().sum::<u64>(), 0);
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn count_letters_ignores_non_ascii_letters() {
        // Accented and non-Latin letters do not count; plain letters inside do.
        let c = counts_of("résumé 中文 😀 x");
        assert_eq!(c.counts()[(b'r' - b'a') as usize], 1);
        assert_eq!(c.counts()[(b's' - b'a') as usize], 1);
        assert_eq!(c.counts()[(b'u' - b'a') as usize], 1);
        assert_eq!(c.counts()[(b'm' - b'a') as usize], 1);
        assert_eq!(c.counts()[(b'x' - b'a') as usize], 1);
        assert_eq!(c.total(), 5);
    }

    #[test]
    fn apv_normalizes() {
        let v = to_apv(&counts_of("aab")).unwrap();
        assert_eq!(v.kind(), VectorKind::Raw);
        assert_eq!(v.components()[0], 2.0 / 3.0);
        assert_eq!(v.components()[1], 1.0 / 3.0);
        assert_eq!(v.components()[2..].iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn apv_pangram_is_uniform() {
        let v = to_apv(&counts_of("abcdefghijklmnopqrstuvwxyz")).unwrap();
        for &c in v.components() {
            assert_eq!(c, 1.0 / 26.0);
        }
    }

    #[test]
    fn apv_rejects_letterless_text() {
        assert_eq!(to_apv(&counts_of("1234 !?")), Err(FeatureError::EmptyText));
    }

    #[test]
    fn n_sapv_zero_equals_apv() {
        let counts = counts_of("aab");
        let apv = to_apv(&counts).unwrap();
        let sapv = to_n_sapv(&counts, 0).unwrap();
        assert!(apv.bits_eq(&sapv));
    }

    #[test]
    fn n_sapv_supplies_missing_letters() {
        // "aab": a=2, b=1, 24 letters supplied with 1 -> denominator 27.
        let v = to_n_sapv(&counts_of("aab"), 1).unwrap();
        assert_eq!(v.components()[0], 2.0 / 27.0);
        assert_eq!(v.components()[1], 1.0 / 27.0);
        for &c in &v.components()[2..] {
            assert_eq!(c, 1.0 / 27.0);
        }
    }

    #[test]
    fn n_sapv_rescues_empty_text() {
        let v = to_n_sapv(&counts_of(""), 1).unwrap();
        for &c in v.components() {
            assert_eq!(c, 1.0 / 26.0);
        }
    }

    #[test]
    fn ssm_of_standard_vector_is_zero() {
        let v0 = StandardVector::english();
        let raw = FeatureVector::from_components(*v0.components(), VectorKind::Raw);
        let shifted = apply_ssm(&raw, v0).unwrap();
        assert_eq!(shifted.kind(), VectorKind::Ssm);
        for &c in shifted.components() {
            assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn ssm_output_sums_to_zero() {
        let v = to_apv(&counts_of("the quick brown fox jumps over the lazy dog")).unwrap();
        let shifted = apply_ssm(&v, StandardVector::english()).unwrap();
        let sum: f64 = shifted.components().iter().sum();
        assert!(sum.abs() < 1e-9, "sum {sum}");
    }

    #[test]
    fn ssm_rejects_already_shifted_input() {
        let v0 = StandardVector::english();
        let raw = to_apv(&counts_of("hello")).unwrap();
        let once = apply_ssm(&raw, v0).unwrap();
        assert_eq!(apply_ssm(&once, v0), Err(FeatureError::KindMismatch));
    }

    // Hand-transcribed from the bundled file; kept independent of the loader
    // so a transcription slip in either place shows up as a mismatch.
    const REFERENCE_PERCENTS: [f64; 26] = [
        8.12, 1.49, 2.71, 4.32, 12.02, 2.30, 2.03, 5.92, 7.31, 0.10, 0.69, 3.98, 2.61, 6.95,
        7.68, 1.82, 0.11, 6.02, 6.28, 9.10, 2.88, 1.11, 2.09, 0.17, 2.11, 0.07,
    ];

    #[test]
    fn bundled_standard_vector_matches_reference_table() {
        let v0 = StandardVector::english();
        let sum: f64 = REFERENCE_PERCENTS.iter().sum();
        for (i, (&loaded, &pct)) in v0
            .components()
            .iter()
            .zip(REFERENCE_PERCENTS.iter())
            .enumerate()
        {
            let expected = pct / sum;
            assert!(
                (loaded - expected).abs() < 1e-15,
                "component {i}: {loaded} vs {expected}"
            );
        }
        let total: f64 = v0.components().iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
        assert!(v0.components().iter().all(|&c| c > 0.0));
    }

    #[test]
    fn ssm_e_component_hand_subtraction() {
        // Craft a raw vector with e = 0.10 and the rest spread uniformly.
        let mut components = [0.9 / 25.0; ALPHABET_LEN];
        components[4] = 0.10;
        let v = FeatureVector::from_components(components, VectorKind::Raw);
        let shifted = apply_ssm(&v, StandardVector::english()).unwrap();

        let sum: f64 = REFERENCE_PERCENTS.iter().sum();
        let expected = 0.10 - 12.02 / sum;
        assert!((shifted.components()[4] - expected).abs() < 1e-15);
    }

    #[test]
    fn loader_accepts_percent_or_fraction() {
        let percent = load_standard_vector(DEFAULT_STANDARD_VECTOR_FILE.as_bytes()).unwrap();
        let fraction_file: String = DEFAULT_STANDARD_VECTOR_FILE
            .lines()
            .map(|line| {
                if line.starts_with('#') || line.trim().is_empty() {
                    String::new()
                } else {
                    let (letter, value) = line.split_once(',').unwrap();
                    format!("{letter},{}\n", value.parse::<f64>().unwrap() / 100.0)
                }
            })
            .collect();
        let fraction = load_standard_vector(fraction_file.as_bytes()).unwrap();
        for (a, b) in percent.components().iter().zip(fraction.components()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn loader_rejects_missing_entries() {
        let truncated: String = DEFAULT_STANDARD_VECTOR_FILE.lines().take(20).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            load_standard_vector(truncated.as_bytes()),
            Err(FeatureError::MalformedStandardVector(_))
        ));
    }

    #[test]
    fn loader_rejects_duplicates() {
        let doubled = format!("{DEFAULT_STANDARD_VECTOR_FILE}e,1.0\n");
        assert!(matches!(
            load_standard_vector(doubled.as_bytes()),
            Err(FeatureError::MalformedStandardVector(_))
        ));
    }

    #[test]
    fn loader_rejects_garbage_lines() {
        for bad in ["e;12.0\n", "ee,12.0\n", "e,\n", "e,-3.0\n", "e,zzz\n", "é,1.0\n"] {
            assert!(
                matches!(
                    load_standard_vector(bad.as_bytes()),
                    Err(FeatureError::MalformedStandardVector(_))
                ),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn extract_composes_the_pipeline() {
        let apv = extract("aab", &PreprocessConfig::apv()).unwrap();
        assert_eq!(apv.components()[0], 2.0 / 3.0);
        assert_eq!(apv.components()[1], 1.0 / 3.0);

        let config = PreprocessConfig::variant(1, true);
        let shifted = extract("aab", &config).unwrap();
        assert_eq!(shifted.kind(), VectorKind::Ssm);
        let sum: f64 = shifted.components().iter().sum();
        assert!(sum.abs() < 1e-9);

        assert_eq!(
            extract("1234", &PreprocessConfig::apv()),
            Err(FeatureError::EmptyText)
        );
    }

    // Reference counter: one char at a time through the std case fold.
    fn naive_counts(text: &str) -> AlphabetCounts {
        let mut counts = [0u64; ALPHABET_LEN];
        for ch in text.chars() {
            if ch.is_ascii_alphabetic() {
                counts[(ch.to_ascii_lowercase() as u8 - b'a') as usize] += 1;
            }
        }
        AlphabetCounts {
            counts,
            total: counts.iter().sum(),
        }
    }

    proptest! {
        #[test]
        fn counting_matches_naive_oracle(text in "\\PC*") {
            prop_assert_eq!(count_letters(&text), naive_counts(&text));
        }

        #[test]
        fn n_sapv_components_sum_to_one(text in "[a-zA-Z0-9 ,.!?]{1,200}", n in 0u32..6) {
            let counts = count_letters(&text);
            prop_assume!(counts.total() > 0 || n > 0);
            let v = to_n_sapv(&counts, n).unwrap();
            let sum: f64 = v.components().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            for &c in v.components() {
                prop_assert!(c >= 0.0 && c <= 1.0);
            }
        }

        #[test]
        fn anagram_invariance_is_exact(text in "[a-zA-Z .,]{0,120}", seed in any::<u64>(), n in 0u32..3) {
            let mut chars: Vec<char> = text.chars().collect();
            crate::rng::SplitMix64::new(seed).shuffle(&mut chars);
            let permuted: String = chars.into_iter().collect();

            let config = PreprocessConfig::variant(n, n % 2 == 0);
            match (extract(&text, &config), extract(&permuted, &config)) {
                (Ok(a), Ok(b)) => prop_assert!(a.bits_eq(&b)),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                (a, b) => prop_assert!(false, "diverged: {:?} vs {:?}", a, b),
            }
        }

        #[test]
        fn doubling_text_leaves_apv_unchanged(text in "[a-z ]{1,100}") {
            prop_assume!(count_letters(&text).total() > 0);
            let single = to_apv(&count_letters(&text)).unwrap();
            let doubled = to_apv(&count_letters(&format!("{text}{text}"))).unwrap();
            prop_assert!(single.bits_eq(&doubled));
        }

        #[test]
        fn ssm_zero_sum_property(text in "[a-zA-Z]{1,200}", n in 0u32..4) {
            let v = to_n_sapv(&count_letters(&text), n).unwrap();
            let shifted = apply_ssm(&v, StandardVector::english()).unwrap();
            let sum: f64 = shifted.components().iter().sum();
            prop_assert!(sum.abs() < 1e-9);
        }
    }
}
