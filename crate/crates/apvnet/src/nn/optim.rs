//! Parameter update rules: plain SGD and Adam with bias correction.

use serde::{Deserialize, Serialize};

use super::{Gradients, MlpModel, NnError};
use crate::linalg::Matrix;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Adam,
    Sgd,
}

impl std::fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OptimizerKind::Adam => write!(f, "adam"),
            OptimizerKind::Sgd => write!(f, "sgd"),
        }
    }
}

impl std::str::FromStr for OptimizerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "adam" => Ok(OptimizerKind::Adam),
            "sgd" => Ok(OptimizerKind::Sgd),
            other => Err(format!("unknown optimizer {other:?} (expected adam or sgd)")),
        }
    }
}

/// Per-parameter moment accumulators (Adam) and the step counter. SGD keeps
/// only the counter.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    kind: OptimizerKind,
    step: u64,
    m_weights: Vec<Matrix>,
    v_weights: Vec<Matrix>,
    m_biases: Vec<Vec<f64>>,
    v_biases: Vec<Vec<f64>>,
}

impl OptimizerState {
    pub fn new(model: &MlpModel, kind: OptimizerKind) -> Self {
        let (m_weights, v_weights, m_biases, v_biases) = match kind {
            OptimizerKind::Sgd => (Vec::new(), Vec::new(), Vec::new(), Vec::new()),
            OptimizerKind::Adam => {
                let zeros_w: Vec<Matrix> = model
                    .weights()
                    .iter()
                    .map(|w| Matrix::zeros(w.rows(), w.cols()))
                    .collect();
                let zeros_b: Vec<Vec<f64>> =
                    model.biases().iter().map(|b| vec![0.0; b.len()]).collect();
                (zeros_w.clone(), zeros_w, zeros_b.clone(), zeros_b)
            }
        };
        Self {
            kind,
            step: 0,
            m_weights,
            v_weights,
            m_biases,
            v_biases,
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

fn shapes_match(model: &MlpModel, grads: &Gradients) -> bool {
    model.weights().len() == grads.weights.len()
        && model.biases().len() == grads.biases.len()
        && model
            .weights()
            .iter()
            .zip(grads.weights.iter())
            .all(|(a, b)| a.rows() == b.rows() && a.cols() == b.cols())
        && model
            .biases()
            .iter()
            .zip(grads.biases.iter())
            .all(|(a, b)| a.len() == b.len())
}

/// Applies one update. SGD: `theta -= lr * g`. Adam: standard
/// first/second-moment update with bias correction
/// (`beta1 = 0.9`, `beta2 = 0.999`, `epsilon = 1e-8`).
pub fn optimizer_step(
    model: &mut MlpModel,
    grads: &Gradients,
    state: &mut OptimizerState,
    learning_rate: f64,
) -> Result<(), NnError> {
    if !shapes_match(model, grads) {
        return Err(NnError::ShapeMismatch);
    }
    state.step += 1;
    match state.kind {
        OptimizerKind::Sgd => {
            for (w, gw) in model.weights_mut().iter_mut().zip(grads.weights.iter()) {
                for (p, &g) in w.as_mut_slice().iter_mut().zip(gw.as_slice()) {
                    *p -= learning_rate * g;
                }
            }
            for (b, gb) in model.biases_mut().iter_mut().zip(grads.biases.iter()) {
                for (p, &g) in b.iter_mut().zip(gb.iter()) {
                    *p -= learning_rate * g;
                }
            }
        }
        OptimizerKind::Adam => {
            let t = state.step as i32;
            let bc1 = 1.0 - ADAM_BETA1.powi(t);
            let bc2 = 1.0 - ADAM_BETA2.powi(t);
            let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *p -= learning_rate * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
            };
            for l in 0..grads.weights.len() {
                let w = &mut model.weights[l];
                for idx in 0..grads.weights[l].as_slice().len() {
                    update(
                        &mut w.as_mut_slice()[idx],
                        grads.weights[l].as_slice()[idx],
                        &mut state.m_weights[l].as_mut_slice()[idx],
                        &mut state.v_weights[l].as_mut_slice()[idx],
                    );
                }
            }
            for l in 0..grads.biases.len() {
                let b = &mut model.biases[l];
                for idx in 0..grads.biases[l].len() {
                    update(
                        &mut b[idx],
                        grads.biases[l][idx],
                        &mut state.m_biases[l][idx],
                        &mut state.v_biases[l][idx],
                    );
                }
            }
        }
    }
    Ok(())
}
