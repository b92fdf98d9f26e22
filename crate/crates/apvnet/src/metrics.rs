//! Confusion-matrix evaluation: accuracy plus per-class precision, recall, F1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("predictions ({predictions}) and labels ({labels}) differ in length")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("cannot evaluate zero prediction/label pairs")]
    EmptyInput,
    #[error("confusion matrix has no counts")]
    EmptyMatrix,
}

/// 2x2 counts indexed `(actual, predicted)` over classes {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Evaluation summary for a binary classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    /// Metrics for class 0 (fake) and class 1 (true).
    pub class0: ClassMetrics,
    pub class1: ClassMetrics,
    /// Number of actual instances per class.
    pub support: [u64; 2],
    /// Set when some class had zero predicted or zero actual instances, in
    /// which case the affected ratios are reported as 0 instead of 0/0.
    pub degenerate: bool,
}

impl MetricsReport {
    pub fn class(&self, label: u8) -> &ClassMetrics {
        if label == 0 {
            &self.class0
        } else {
            &self.class1
        }
    }
}

/// Tallies `(actual, predicted)` pairs. Values other than 0 are treated as
/// class 1 by the `u8` encoding contract of the crate.
pub fn confusion(predictions: &[u8], labels: &[u8]) -> Result<ConfusionMatrix, MetricsError> {
    if predictions.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut counts = [[0u64; 2]; 2];
    for (&pred, &actual) in predictions.iter().zip(labels.iter()) {
        counts[usize::from(actual != 0)][usize::from(pred != 0)] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

fn ratio(numerator: u64, denominator: u64, degenerate: &mut bool) -> f64 {
    if denominator == 0 {
        *degenerate = true;
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

/// Derives the report: accuracy = trace/total; per class `c`,
/// precision = `cc / column c`, recall = `cc / row c`,
/// f1 = harmonic mean of the two (0 when both are 0).
pub fn report(matrix: &ConfusionMatrix) -> Result<MetricsReport, MetricsError> {
    let total = matrix.total();
    if total == 0 {
        return Err(MetricsError::EmptyMatrix);
    }
    let c = &matrix.counts;
    let mut degenerate = false;
    let mut per_class = [ClassMetrics {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    }; 2];
    for (k, metrics) in per_class.iter_mut().enumerate() {
        let true_positive = c[k][k];
        let predicted = c[0][k] + c[1][k];
        let actual = c[k][0] + c[k][1];
        let precision = ratio(true_positive, predicted, &mut degenerate);
        let recall = ratio(true_positive, actual, &mut degenerate);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        *metrics = ClassMetrics {
            precision,
            recall,
            f1,
        };
    }
    Ok(MetricsReport {
        accuracy: (c[0][0] + c[1][1]) as f64 / total as f64,
        class0: per_class[0],
        class1: per_class[1],
        support: [c[0][0] + c[0][1], c[1][0] + c[1][1]],
        degenerate,
    })
}

/// Renders reports as a text table shaped like the experiment write-ups:
/// one row per variant, per-class values as `0: x.xx, 1: y.yy`, two decimals.
pub fn format_table(rows: &[(String, MetricsReport)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<14} {:<9} {:<19} {:<19} {:<19}\n",
        "Type", "Accuracy", "Precision", "recall", "F1-score"
    ));
    for (name, r) in rows {
        out.push_str(&format!(
            "{:<14} {:<9.2} {:<19} {:<19} {:<19}\n",
            name,
            r.accuracy,
            format!("0: {:.2}, 1: {:.2}", r.class0.precision, r.class1.precision),
            format!("0: {:.2}, 1: {:.2}", r.class0.recall, r.class1.recall),
            format!("0: {:.2}, 1: {:.2}", r.class0.f1, r.class1.f1),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn confusion_hand_count() {
        let m = confusion(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap();
        assert_eq!(m.counts[0][0], 2);
        assert_eq!(m.counts[0][1], 1);
        assert_eq!(m.counts[1][1], 1);
        assert_eq!(m.counts[1][0], 0);
        assert_eq!(m.total(), 4);
    }

    #[test]
    fn perfect_predictions_have_empty_off_diagonal() {
        let m = confusion(&[0, 1, 0, 1], &[0, 1, 0, 1]).unwrap();
        assert_eq!(m.counts[0][1], 0);
        assert_eq!(m.counts[1][0], 0);
    }

    #[test]
    fn confusion_rejects_bad_shapes() {
        assert_eq!(
            confusion(&[0, 1, 0], &[0, 1, 0, 1]),
            Err(MetricsError::LengthMismatch { predictions: 3, labels: 4 })
        );
        assert_eq!(confusion(&[], &[]), Err(MetricsError::EmptyInput));
    }

    #[test]
    fn report_hand_arithmetic() {
        let m = confusion(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap();
        let r = report(&m).unwrap();
        assert_eq!(r.accuracy, 0.75);
        assert_eq!(r.class1.precision, 0.5);
        assert_eq!(r.class1.recall, 1.0);
        assert!((r.class1.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.class0.precision, 1.0);
        assert!((r.class0.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.class0.f1 - 0.8).abs() < 1e-15);
        assert_eq!(r.support, [3, 1]);
        assert!(!r.degenerate);
    }

    #[test]
    fn perfect_report_is_all_ones() {
        let m = confusion(&[0, 1, 1], &[0, 1, 1]).unwrap();
        let r = report(&m).unwrap();
        assert_eq!(r.accuracy, 1.0);
        for c in [r.class0, r.class1] {
            assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn degenerate_class_reports_zero_with_flag() {
        let m = confusion(&[0, 0, 0], &[0, 0, 0]).unwrap();
        let r = report(&m).unwrap();
        assert_eq!(r.class1.precision, 0.0);
        assert_eq!(r.class1.recall, 0.0);
        assert_eq!(r.class1.f1, 0.0);
        assert!(r.degenerate);
        assert_eq!(r.accuracy, 1.0);
    }

    #[test]
    fn empty_matrix_is_rejected() {
        let m = ConfusionMatrix { counts: [[0, 0], [0, 0]] };
        assert_eq!(report(&m), Err(MetricsError::EmptyMatrix));
    }

    #[test]
    fn table_formatting_two_decimals() {
        let m = confusion(&[0, 1, 1, 0], &[0, 1, 0, 0]).unwrap();
        let r = report(&m).unwrap();
        let table = format_table(&[("APV".to_string(), r)]);
        assert!(table.contains("Type"));
        assert!(table.contains("APV"));
        assert!(table.contains("0.75"));
        assert!(table.contains("0: 1.00, 1: 0.50"));
    }

    proptest! {
        #[test]
        fn accuracy_is_support_weighted_recall(
            pairs in prop::collection::vec((0u8..2, 0u8..2), 1..200)
        ) {
            let preds: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            let labels: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            let r = report(&confusion(&preds, &labels).unwrap()).unwrap();
            let total = (r.support[0] + r.support[1]) as f64;
            let weighted = (r.support[0] as f64 * r.class0.recall
                + r.support[1] as f64 * r.class1.recall) / total;
            prop_assert!((r.accuracy - weighted).abs() < 1e-12);
        }

        #[test]
        fn swapping_classes_transposes_the_report(
            pairs in prop::collection::vec((0u8..2, 0u8..2), 1..200)
        ) {
            let preds: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            let labels: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            let swapped_preds: Vec<u8> = preds.iter().map(|&p| 1 - p).collect();
            let swapped_labels: Vec<u8> = labels.iter().map(|&l| 1 - l).collect();

            let a = report(&confusion(&preds, &labels).unwrap()).unwrap();
            let b = report(&confusion(&swapped_preds, &swapped_labels).unwrap()).unwrap();
            prop_assert_eq!(a.accuracy, b.accuracy);
            prop_assert_eq!(a.class0, b.class1);
            prop_assert_eq!(a.class1, b.class0);
            prop_assert_eq!(a.support[0], b.support[1]);
        }

        #[test]
        fn all_values_in_unit_interval(
            pairs in prop::collection::vec((0u8..2, 0u8..2), 1..100)
        ) {
            let preds: Vec<u8> = pairs.iter().map(|p| p.0).collect();
            let labels: Vec<u8> = pairs.iter().map(|p| p.1).collect();
            let r = report(&confusion(&preds, &labels).unwrap()).unwrap();
            for v in [
                r.accuracy,
                r.class0.precision, r.class0.recall, r.class0.f1,
                r.class1.precision, r.class1.recall, r.class1.f1,
            ] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
