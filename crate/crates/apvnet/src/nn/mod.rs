//! From-scratch dense network: ReLU hidden layers, a single sigmoid output,
//! binary cross-entropy, backpropagation, and finite-difference verification.
//!
//! Everything runs in `f64` with summations in fixed index order, so training
//! is a deterministic function of the seeds and inputs.

mod model_io;
pub mod optim;
pub mod train;

pub use optim::{optimizer_step, OptimizerKind, OptimizerState};
pub use train::{train, TrainConfig, TrainHistory};

use thiserror::Error;

use crate::linalg::{dot, Matrix};
use crate::rng::SplitMix64;

/// Network shape used for the classification experiments:
/// 26 inputs, three 128-wide ReLU layers, one sigmoid output.
pub const DEFAULT_LAYER_DIMS: [usize; 5] = [26, 128, 128, 128, 1];

/// Sigmoid outputs are nudged into `[SIGMOID_FLOOR, 1 - SIGMOID_FLOOR]` so the
/// output range stays strictly inside (0, 1) even when the logit saturates
/// past f64 resolution.
const SIGMOID_FLOOR: f64 = 1e-12;

/// Probabilities are clamped to `[BCE_CLAMP, 1 - BCE_CLAMP]` inside the loss.
/// This is a numerics guard against `ln(0)`; it is not label smoothing.
pub const BCE_CLAMP: f64 = 1e-7;

#[derive(Debug, Error, PartialEq)]
pub enum NnError {
    #[error("architecture must have >= 2 layer dims, all positive, and a single output unit")]
    BadArchitecture,
    #[error("input rows have {got} components but the model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("predictions ({predictions}) and labels ({labels}) differ in length")]
    LengthMismatch { predictions: usize, labels: usize },
    #[error("batch must contain at least one row")]
    EmptyBatch,
    #[error("gradient or optimizer shapes do not match the model parameters")]
    ShapeMismatch,
    #[error("finite-difference step must be positive and finite")]
    DegenerateStep,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("batch size {batch_size} must be in 1..={rows}")]
    BadBatchSize { batch_size: usize, rows: usize },
    #[error("decision threshold must lie in [0, 1]")]
    BadThreshold,
    #[error("malformed model file: {0}")]
    MalformedModelFile(String),
    #[error("unsupported model file version {0}")]
    UnsupportedVersion(u32),
}

/// Dense feed-forward network parameters.
///
/// `weights[l]` has shape `(layer_dims[l+1], layer_dims[l])` (row per output
/// unit); `biases[l]` has length `layer_dims[l+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layer_dims: Vec<usize>,
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
}

/// Parameter gradients with the same shapes as the model.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

fn sigmoid(z: f64) -> f64 {
    let p = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    };
    p.clamp(SIGMOID_FLOOR, 1.0 - SIGMOID_FLOOR)
}

impl MlpModel {
    /// Initializes weights with uniform Glorot bounds
    /// `±sqrt(6 / (fan_in + fan_out))` drawn from the portable generator, and
    /// zero biases. The same seed always yields the same parameters.
    pub fn init(seed: u64, layer_dims: &[usize]) -> Result<Self, NnError> {
        if layer_dims.len() < 2
            || layer_dims.iter().any(|&d| d == 0)
            || *layer_dims.last().unwrap() != 1
        {
            return Err(NnError::BadArchitecture);
        }
        let mut rng = SplitMix64::new(seed);
        let mut weights = Vec::with_capacity(layer_dims.len() - 1);
        let mut biases = Vec::with_capacity(layer_dims.len() - 1);
        for pair in layer_dims.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let mut w = Matrix::zeros(fan_out, fan_in);
            for value in w.as_mut_slice() {
                *value = rng.next_in_range(-bound, bound);
            }
            weights.push(w);
            biases.push(vec![0.0; fan_out]);
        }
        Ok(Self {
            layer_dims: layer_dims.to_vec(),
            weights,
            biases,
        })
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn weights(&self) -> &[Matrix] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn num_parameters(&self) -> usize {
        self.layer_dims
            .windows(2)
            .map(|pair| pair[1] * (pair[0] + 1))
            .sum()
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [Matrix] {
        &mut self.weights
    }

    pub(crate) fn biases_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.biases
    }

    /// Probability of class 1 for every input row, in row order.
    pub fn forward(&self, inputs: &Matrix) -> Result<Vec<f64>, NnError> {
        Ok(self.forward_full(inputs)?.probabilities)
    }

    /// Forward pass keeping per-layer activations for backpropagation.
    pub(crate) fn forward_full(&self, inputs: &Matrix) -> Result<ForwardPass, NnError> {
        if inputs.cols() != self.input_dim() {
            return Err(NnError::DimensionMismatch {
                expected: self.input_dim(),
                got: inputs.cols(),
            });
        }
        let batch = inputs.rows();
        let n_layers = self.weights.len();
        // activations[0] is the input; activations[l] the post-ReLU output of
        // hidden layer l. The sigmoid output is kept separately.
        let mut activations: Vec<Matrix> = Vec::with_capacity(n_layers);
        activations.push(inputs.clone());

        for l in 0..n_layers - 1 {
            let w = &self.weights[l];
            let b = &self.biases[l];
            let prev = &activations[l];
            let mut out = Matrix::zeros(batch, w.rows());
            for r in 0..batch {
                let x = prev.row(r);
                let dst = out.row_mut(r);
                for (o, value) in dst.iter_mut().enumerate() {
                    let z = dot(w.row(o), x) + b[o];
                    *value = if z > 0.0 { z } else { 0.0 };
                }
            }
            activations.push(out);
        }

        let w = &self.weights[n_layers - 1];
        let b = &self.biases[n_layers - 1];
        let last = &activations[n_layers - 1];
        let mut probabilities = Vec::with_capacity(batch);
        for r in 0..batch {
            let z = dot(w.row(0), last.row(r)) + b[0];
            probabilities.push(sigmoid(z));
        }
        Ok(ForwardPass {
            activations,
            probabilities,
        })
    }

    /// Hard decision for one feature row: 1 when the forward probability is
    /// greater than or equal to `threshold`.
    pub fn predict(&self, features: &[f64], threshold: f64) -> Result<u8, NnError> {
        let p = self.predict_proba(features)?;
        if !(0.0..=1.0).contains(&threshold) {
            return Err(NnError::BadThreshold);
        }
        Ok(u8::from(p >= threshold))
    }

    /// Forward probability for one feature row.
    pub fn predict_proba(&self, features: &[f64]) -> Result<f64, NnError> {
        let inputs = Matrix::from_vec(1, features.len(), features.to_vec());
        Ok(self.forward(&inputs)?[0])
    }

    /// Hard decisions for a batch of rows.
    pub fn predict_batch(&self, inputs: &Matrix, threshold: f64) -> Result<Vec<u8>, NnError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(NnError::BadThreshold);
        }
        Ok(self
            .forward(inputs)?
            .into_iter()
            .map(|p| u8::from(p >= threshold))
            .collect())
    }

    fn zero_gradients(&self) -> Gradients {
        Gradients {
            weights: self
                .weights
                .iter()
                .map(|w| Matrix::zeros(w.rows(), w.cols()))
                .collect(),
            biases: self.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }
}

pub(crate) struct ForwardPass {
    /// `activations[0]` = inputs, `activations[l]` = ReLU output of layer `l`.
    pub activations: Vec<Matrix>,
    pub probabilities: Vec<f64>,
}

/// Mean binary cross-entropy `-(y ln p + (1-y) ln(1-p))` with probabilities
/// clamped to `[1e-7, 1 - 1e-7]`. No label smoothing is applied.
pub fn loss_bce(predictions: &[f64], labels: &[f64]) -> Result<f64, NnError> {
    if predictions.len() != labels.len() {
        return Err(NnError::LengthMismatch {
            predictions: predictions.len(),
            labels: labels.len(),
        });
    }
    if predictions.is_empty() {
        return Err(NnError::EmptyBatch);
    }
    let mut sum = 0.0;
    for (&p, &y) in predictions.iter().zip(labels.iter()) {
        let p = p.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
        sum += -(y * p.ln() + (1.0 - y) * (1.0 - p).ln());
    }
    Ok(sum / predictions.len() as f64)
}

/// Gradients of the mean BCE over the batch with respect to every weight and
/// bias. The output-layer term uses the BCE/sigmoid identity `dL/dz = p - y`.
pub fn backward(model: &MlpModel, inputs: &Matrix, labels: &[f64]) -> Result<Gradients, NnError> {
    if inputs.rows() == 0 {
        return Err(NnError::EmptyBatch);
    }
    if inputs.rows() != labels.len() {
        return Err(NnError::LengthMismatch {
            predictions: inputs.rows(),
            labels: labels.len(),
        });
    }
    let pass = model.forward_full(inputs)?;
    Ok(backward_from_pass(model, &pass, labels))
}

/// Backward step over a completed forward pass. Summation over the batch runs
/// in ascending row order (fixed reassociation).
pub(crate) fn backward_from_pass(model: &MlpModel, pass: &ForwardPass, labels: &[f64]) -> Gradients {
    let batch = pass.probabilities.len();
    let n_layers = model.weights.len();
    let inv_batch = 1.0 / batch as f64;
    let mut grads = model.zero_gradients();

    // delta holds dL/dz for the current layer, one row per sample.
    let mut delta = Matrix::zeros(batch, 1);
    for r in 0..batch {
        delta.set(r, 0, (pass.probabilities[r] - labels[r]) * inv_batch);
    }

    for l in (0..n_layers).rev() {
        let upstream = &pass.activations[l];
        {
            let gw = &mut grads.weights[l];
            let gb = &mut grads.biases[l];
            for r in 0..batch {
                let d_row = delta.row(r);
                let x_row = upstream.row(r);
                for (o, &d) in d_row.iter().enumerate() {
                    let gw_row = gw.row_mut(o);
                    for (gwi, &xi) in gw_row.iter_mut().zip(x_row.iter()) {
                        *gwi += d * xi;
                    }
                    gb[o] += d;
                }
            }
        }
        if l == 0 {
            break;
        }
        // Propagate to the previous layer and gate through the ReLU mask
        // (activation > 0 <=> pre-activation > 0).
        let w = &model.weights[l];
        let mut next_delta = Matrix::zeros(batch, w.cols());
        for r in 0..batch {
            let d_row = delta.row(r);
            let dst = next_delta.row_mut(r);
            for (o, &d) in d_row.iter().enumerate() {
                let w_row = w.row(o);
                for (di, &wi) in dst.iter_mut().zip(w_row.iter()) {
                    *di += d * wi;
                }
            }
            let act_row = upstream.row(r);
            for (di, &a) in dst.iter_mut().zip(act_row.iter()) {
                if a <= 0.0 {
                    *di = 0.0;
                }
            }
        }
        delta = next_delta;
    }
    grads
}

/// Central-difference verification of [`backward`].
///
/// Every parameter is perturbed by `±step`; the returned value is the maximum
/// over parameters of `|analytic - numeric| / max(|analytic|, |numeric|, 1e-12)`.
/// Intended for architectures small enough to difference exhaustively.
pub fn grad_check(
    model: &MlpModel,
    inputs: &Matrix,
    labels: &[f64],
    step: f64,
) -> Result<f64, NnError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(NnError::DegenerateStep);
    }
    let analytic = backward(model, inputs, labels)?;
    let mut work = model.clone();
    let mut max_rel = 0.0f64;

    let loss_of = |m: &MlpModel| -> Result<f64, NnError> {
        let probs = m.forward(inputs)?;
        loss_bce(&probs, labels)
    };

    for l in 0..work.weights.len() {
        for idx in 0..work.weights[l].as_slice().len() {
            let original = work.weights[l].as_slice()[idx];
            work.weights_mut()[l].as_mut_slice()[idx] = original + step;
            let plus = loss_of(&work)?;
            work.weights_mut()[l].as_mut_slice()[idx] = original - step;
            let minus = loss_of(&work)?;
            work.weights_mut()[l].as_mut_slice()[idx] = original;

            let numeric = (plus - minus) / (2.0 * step);
            let a = analytic.weights[l].as_slice()[idx];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-12);
            max_rel = max_rel.max(rel);
        }
        for idx in 0..work.biases[l].len() {
            let original = work.biases[l][idx];
            work.biases_mut()[l][idx] = original + step;
            let plus = loss_of(&work)?;
            work.biases_mut()[l][idx] = original - step;
            let minus = loss_of(&work)?;
            work.biases_mut()[l][idx] = original;

            let numeric = (plus - minus) / (2.0 * step);
            let a = analytic.biases[l][idx];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-12);
            max_rel = max_rel.max(rel);
        }
    }
    Ok(max_rel)
}
