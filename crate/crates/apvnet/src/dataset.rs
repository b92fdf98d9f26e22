//! Labeled news corpus: CSV ingestion, deterministic splitting, deduplication,
//! and featurization into a design matrix.
//!
//! The expected input is a pair of CSV files, one per class, with a header row
//! and at least a `text` column (`title` optional, extra columns ignored).
//! Fake-class rows are labeled 0, true-class rows 1, and the files are merged
//! fake-then-true with row ids assigned in order.

use std::collections::HashMap;
use std::io::Read;

use thiserror::Error;

use crate::features::{self, FeatureError, FeatureVector, PreprocessConfig, ALPHABET_LEN};
use crate::linalg::Matrix;
use crate::rng::SplitMix64;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("malformed csv in {source_label} source: {message}")]
    MalformedCsv {
        source_label: &'static str,
        message: String,
    },
    #[error("{source_label} source contains no data rows")]
    EmptySource { source_label: &'static str },
    #[error("split needs {requested} rows but the corpus has {available}")]
    SplitTooLarge { requested: usize, available: usize },
}

/// One labeled document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    /// Row index assigned at merge time; preserved by later subsetting so ids
    /// stay traceable back to the ingested corpus.
    pub id: usize,
    pub title: String,
    pub text: String,
    /// 0 = fake, 1 = true.
    pub label: u8,
}

impl Record {
    /// The text that feature extraction sees. Concatenation order is
    /// irrelevant to letter counting.
    pub fn document(&self, include_title: bool) -> String {
        if include_title && !self.title.is_empty() {
            format!("{} {}", self.title, self.text)
        } else {
            self.text.clone()
        }
    }
}

/// An ordered set of records plus per-label ingestion counts.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub records: Vec<Record>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of records per label: `[fake, true]`.
    pub fn label_counts(&self) -> [usize; 2] {
        let mut counts = [0usize; 2];
        for r in &self.records {
            counts[r.label as usize] += 1;
        }
        counts
    }

    pub fn ids(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.id).collect()
    }
}

/// Sizes and seed for a train/test split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_size: usize,
    pub test_size: usize,
    pub seed: u64,
    /// Preserve the corpus class proportions in both halves instead of
    /// sampling uniformly (the standard protocol samples uniformly).
    pub stratified: bool,
}

impl SplitSpec {
    pub fn uniform(train_size: usize, test_size: usize, seed: u64) -> Self {
        Self {
            train_size,
            test_size,
            seed,
            stratified: false,
        }
    }
}

/// Featurized corpus: row-aligned features, labels and record ids, plus ids
/// of records that could not be featurized (letterless text with N = 0).
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub features: Vec<FeatureVector>,
    pub labels: Vec<u8>,
    /// Record id behind each row; disjoint from `skipped_ids`.
    pub ids: Vec<usize>,
    pub skipped_ids: Vec<usize>,
}

impl DesignMatrix {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Features as an `n x 26` input matrix for the network.
    pub fn inputs(&self) -> Matrix {
        let mut m = Matrix::zeros(self.features.len(), ALPHABET_LEN);
        for (i, f) in self.features.iter().enumerate() {
            m.row_mut(i).copy_from_slice(f.components());
        }
        m
    }

    pub fn labels_f64(&self) -> Vec<f64> {
        self.labels.iter().map(|&l| f64::from(l)).collect()
    }
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
}

fn read_rows<R: Read>(
    source: R,
    label: u8,
    source_label: &'static str,
    next_id: &mut usize,
    out: &mut Vec<Record>,
) -> Result<(), DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| DatasetError::MalformedCsv {
            source_label,
            message: e.to_string(),
        })?
        .clone();
    let text_col = find_column(&headers, "text").ok_or(DatasetError::MalformedCsv {
        source_label,
        message: "missing required `text` column".into(),
    })?;
    let title_col = find_column(&headers, "title");

    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| DatasetError::MalformedCsv {
            source_label,
            message: e.to_string(),
        })?;
        let text = record.get(text_col).ok_or(DatasetError::MalformedCsv {
            source_label,
            message: format!("row {} lacks the text field", rows + 1),
        })?;
        let title = title_col.and_then(|c| record.get(c)).unwrap_or("");
        out.push(Record {
            id: *next_id,
            title: title.to_string(),
            text: text.to_string(),
            label,
        });
        *next_id += 1;
        rows += 1;
    }
    if rows == 0 {
        return Err(DatasetError::EmptySource { source_label });
    }
    Ok(())
}

/// Ingests the two-file corpus: fake rows labeled 0, true rows labeled 1,
/// concatenated fake-then-true with ids assigned in order.
pub fn load_corpus<R1: Read, R2: Read>(
    fake_source: R1,
    true_source: R2,
) -> Result<Corpus, DatasetError> {
    let mut records = Vec::new();
    let mut next_id = 0usize;
    read_rows(fake_source, 0, "fake", &mut next_id, &mut records)?;
    read_rows(true_source, 1, "true", &mut next_id, &mut records)?;
    Ok(Corpus { records })
}

/// Seeded uniform subsample of `k` records, returned in original corpus order.
pub fn subsample(corpus: &Corpus, k: usize, seed: u64) -> Result<Corpus, DatasetError> {
    if k > corpus.len() {
        return Err(DatasetError::SplitTooLarge {
            requested: k,
            available: corpus.len(),
        });
    }
    let mut indices: Vec<usize> = (0..corpus.len()).collect();
    SplitMix64::new(seed).shuffle(&mut indices);
    let mut keep = indices[..k].to_vec();
    keep.sort_unstable();
    Ok(Corpus {
        records: keep.iter().map(|&i| corpus.records[i].clone()).collect(),
    })
}

/// Splits by shuffling all row positions with the seed, taking the first
/// `train_size` for train and the next `test_size` for test. Remaining rows
/// are discarded. Same corpus and spec always produce the same split.
///
/// With `stratified` set, each class is shuffled and drawn from separately so
/// both halves keep the corpus class proportions (largest-remainder rounding).
pub fn split(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus), DatasetError> {
    let requested = spec.train_size + spec.test_size;
    if requested > corpus.len() {
        return Err(DatasetError::SplitTooLarge {
            requested,
            available: corpus.len(),
        });
    }
    if spec.stratified {
        return stratified_split(corpus, spec);
    }
    let mut indices: Vec<usize> = (0..corpus.len()).collect();
    SplitMix64::new(spec.seed).shuffle(&mut indices);

    let pick = |range: std::ops::Range<usize>| Corpus {
        records: indices[range]
            .iter()
            .map(|&i| corpus.records[i].clone())
            .collect(),
    };
    let train = pick(0..spec.train_size);
    let test = pick(spec.train_size..requested);
    Ok((train, test))
}

/// Proportional allocation of `want` draws over two class sizes, floor first,
/// remainder to the larger fractional share (class 0 on ties).
fn proportional_allocation(want: usize, counts: [usize; 2]) -> [usize; 2] {
    let total = counts[0] + counts[1];
    let base = [want * counts[0] / total, want * counts[1] / total];
    let remainder = want - base[0] - base[1];
    debug_assert!(remainder <= 1);
    let mut out = base;
    if remainder == 1 {
        let frac = [want * counts[0] % total, want * counts[1] % total];
        if frac[1] > frac[0] {
            out[1] += 1;
        } else {
            out[0] += 1;
        }
    }
    out
}

fn stratified_split(corpus: &Corpus, spec: &SplitSpec) -> Result<(Corpus, Corpus), DatasetError> {
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (position, record) in corpus.records.iter().enumerate() {
        by_class[record.label as usize].push(position);
    }
    // One generator, class 0 shuffled before class 1.
    let mut rng = SplitMix64::new(spec.seed);
    for class in by_class.iter_mut() {
        rng.shuffle(class);
    }
    let counts = [by_class[0].len(), by_class[1].len()];
    let train_alloc = proportional_allocation(spec.train_size, counts);
    let test_alloc = proportional_allocation(spec.test_size, counts);
    for c in 0..2 {
        if train_alloc[c] + test_alloc[c] > counts[c] {
            return Err(DatasetError::SplitTooLarge {
                requested: spec.train_size + spec.test_size,
                available: corpus.len(),
            });
        }
    }
    let pick = |ranges: [std::ops::Range<usize>; 2]| Corpus {
        records: by_class[0][ranges[0].clone()]
            .iter()
            .chain(by_class[1][ranges[1].clone()].iter())
            .map(|&i| corpus.records[i].clone())
            .collect(),
    };
    let train = pick([0..train_alloc[0], 0..train_alloc[1]]);
    let test = pick([
        train_alloc[0]..train_alloc[0] + test_alloc[0],
        train_alloc[1]..train_alloc[1] + test_alloc[1],
    ]);
    Ok((train, test))
}

/// Drops every record whose extracted feature vector is componentwise
/// identical to an earlier one. Records that cannot be featurized (letterless
/// text with N = 0) are kept untouched.
pub fn dedup_by_vector(corpus: &Corpus, config: &PreprocessConfig) -> Corpus {
    let mut seen: HashMap<[u64; ALPHABET_LEN], ()> = HashMap::new();
    let mut records = Vec::with_capacity(corpus.len());
    for record in &corpus.records {
        match features::extract(&record.document(config.include_title), config) {
            Ok(v) => {
                let mut key = [0u64; ALPHABET_LEN];
                for (k, c) in key.iter_mut().zip(v.components()) {
                    *k = c.to_bits();
                }
                if seen.insert(key, ()).is_none() {
                    records.push(record.clone());
                }
            }
            Err(FeatureError::EmptyText) => records.push(record.clone()),
            Err(_) => records.push(record.clone()),
        }
    }
    Corpus { records }
}

/// Featurizes every record in corpus order. Records raising `EmptyText` are
/// dropped and their ids collected (ascending) in `skipped_ids`.
pub fn featurize_corpus(corpus: &Corpus, config: &PreprocessConfig) -> DesignMatrix {
    let mut features_out = Vec::with_capacity(corpus.len());
    let mut labels = Vec::with_capacity(corpus.len());
    let mut ids = Vec::with_capacity(corpus.len());
    let mut skipped_ids = Vec::new();
    for record in &corpus.records {
        match features::extract(&record.document(config.include_title), config) {
            Ok(v) => {
                features_out.push(v);
                labels.push(record.label);
                ids.push(record.id);
            }
            Err(_) => skipped_ids.push(record.id),
        }
    }
    skipped_ids.sort_unstable();
    DesignMatrix {
        features: features_out,
        labels,
        ids,
        skipped_ids,
    }
}

/// Writes a design matrix as UTF-8 CSV with header `id,label,f_a,...,f_z`.
/// Feature values are printed with 17 significant digits, which round-trips
/// `f64` losslessly.
pub fn export_design_matrix<W: std::io::Write>(
    matrix: &DesignMatrix,
    writer: W,
) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["id".to_string(), "label".to_string()];
    header.extend((b'a'..=b'z').map(|c| format!("f_{}", c as char)));
    out.write_record(&header)?;
    for ((id, label), feature) in matrix
        .ids
        .iter()
        .zip(matrix.labels.iter())
        .zip(matrix.features.iter())
    {
        let mut row = vec![id.to_string(), label.to_string()];
        row.extend(feature.components().iter().map(|v| format!("{v:.16e}")));
        out.write_record(&row)?;
    }
    out.flush()
}

/// Reads back the format written by [`export_design_matrix`]. The vector kind
/// is inferred from the component sum (raw vectors sum to 1, shifted ones
/// to 0); skipped ids are not part of the format.
pub fn import_design_matrix<R: Read>(reader: R) -> Result<DesignMatrix, DatasetError> {
    let source_label = "features";
    let malformed = |message: String| DatasetError::MalformedCsv {
        source_label,
        message,
    };
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    {
        let headers = csv_reader
            .headers()
            .map_err(|e| malformed(e.to_string()))?;
        let mut expected = vec!["id".to_string(), "label".to_string()];
        expected.extend((b'a'..=b'z').map(|c| format!("f_{}", c as char)));
        if headers.iter().map(str::to_string).collect::<Vec<_>>() != expected {
            return Err(malformed("unexpected header".into()));
        }
    }

    let mut matrix = DesignMatrix {
        features: Vec::new(),
        labels: Vec::new(),
        ids: Vec::new(),
        skipped_ids: Vec::new(),
    };
    for (row_no, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|e| malformed(e.to_string()))?;
        if record.len() != 2 + ALPHABET_LEN {
            return Err(malformed(format!("row {}: wrong field count", row_no + 1)));
        }
        let id: usize = record[0]
            .parse()
            .map_err(|_| malformed(format!("row {}: bad id", row_no + 1)))?;
        let label: u8 = match &record[1] {
            "0" => 0,
            "1" => 1,
            other => return Err(malformed(format!("row {}: bad label {other:?}", row_no + 1))),
        };
        let mut components = [0.0f64; ALPHABET_LEN];
        for (k, c) in components.iter_mut().enumerate() {
            *c = record[2 + k]
                .parse()
                .map_err(|_| malformed(format!("row {}: bad feature value", row_no + 1)))?;
        }
        let sum: f64 = components.iter().sum();
        let kind = if sum.abs() < 0.5 {
            crate::features::VectorKind::Ssm
        } else {
            crate::features::VectorKind::Raw
        };
        matrix.ids.push(id);
        matrix.labels.push(label);
        matrix
            .features
            .push(FeatureVector::from_components(components, kind));
    }
    if matrix.is_empty() {
        return Err(DatasetError::EmptySource { source_label });
    }
    Ok(matrix)
}
