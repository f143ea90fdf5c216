//! From-scratch two-layer graph convolutional network: sigmoid
//! activations, binary cross-entropy on two output channels, dropout
//! after both layers, full-batch gradient descent over masked nodes.
//! The identity adjacency turns the same machinery into the structure
//! ablation MLP.

pub mod matrix;

pub use matrix::Mat;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NormalizedAdjacency;

const BCE_EPSILON: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    /// Sigmoid outputs with binary cross-entropy against one-hot targets.
    SigmoidBce,
    /// Conventional softmax + cross-entropy, kept as a comparison switch.
    SoftmaxCrossEntropy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GcnConfig {
    pub layers: usize,
    pub hidden_channels: usize,
    pub output_channels: usize,
    pub epochs: usize,
    pub dropout_rate: f64,
    /// How many of the two activation sites apply dropout during training.
    pub dropout_layers: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub loss: LossKind,
}

impl Default for GcnConfig {
    fn default() -> Self {
        GcnConfig {
            layers: 2,
            hidden_channels: 32,
            output_channels: 2,
            epochs: 300,
            dropout_rate: 0.5,
            dropout_layers: 2,
            learning_rate: 0.01,
            seed: 42,
            loss: LossKind::SigmoidBce,
        }
    }
}

impl GcnConfig {
    fn validate(&self) -> Result<()> {
        if self.layers != 2 {
            return Err(Error::InvalidInput(format!(
                "this network is two-layer by construction; got layers = {}",
                self.layers
            )));
        }
        if self.hidden_channels == 0 || self.output_channels == 0 {
            return Err(Error::InvalidInput("channel counts must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::InvalidInput(format!(
                "dropout rate {} outside [0, 1)",
                self.dropout_rate
            )));
        }
        if self.dropout_layers > 2 {
            return Err(Error::InvalidInput(
                "at most two dropout sites exist".into(),
            ));
        }
        if self.learning_rate < 0.0 || !self.learning_rate.is_finite() {
            return Err(Error::InvalidInput("learning rate must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Train/test index sets over the labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldMasks {
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
}

pub struct GcnModel {
    w1: Mat,
    w2: Mat,
    rng: ChaCha8Rng,
    config: GcnConfig,
}

/// Everything the backward pass replays from one training forward pass.
struct Cache {
    h1: Mat,
    d1: Mat,
    h2: Mat,
    probs: Mat,
    mask1: Option<Mat>,
    mask2: Option<Mat>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One-hot encoding of class labels.
pub fn one_hot(labels: &[u8], classes: usize) -> Mat {
    let mut m = Mat::zeros(labels.len(), classes);
    for (i, &label) in labels.iter().enumerate() {
        m.set(i, label as usize, 1.0);
    }
    m
}

/// Masked mean binary cross-entropy over all output channels, with
/// probabilities clamped to [eps, 1 - eps].
pub fn bce_loss(probs: &Mat, labels_onehot: &Mat, mask: &[usize]) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::InvalidInput("loss mask is empty".into()));
    }
    if probs.shape() != labels_onehot.shape() {
        return Err(Error::Shape(format!(
            "probabilities {}x{} vs labels {}x{}",
            probs.rows(),
            probs.cols(),
            labels_onehot.rows(),
            labels_onehot.cols()
        )));
    }
    let mut total = 0.0;
    for &i in mask {
        for j in 0..probs.cols() {
            let p = probs.get(i, j).clamp(BCE_EPSILON, 1.0 - BCE_EPSILON);
            let y = labels_onehot.get(i, j);
            total -= y * p.ln() + (1.0 - y) * (1.0 - p).ln();
        }
    }
    Ok(total / (mask.len() * probs.cols()) as f64)
}

fn softmax_rows(z: &Mat) -> Mat {
    let mut out = Mat::zeros(z.rows(), z.cols());
    for i in 0..z.rows() {
        let row_max = z.row(i).iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let exps: Vec<f64> = z.row(i).iter().map(|&v| (v - row_max).exp()).collect();
        let sum: f64 = exps.iter().sum();
        for (j, e) in exps.iter().enumerate() {
            out.set(i, j, e / sum);
        }
    }
    out
}

fn cross_entropy_loss(probs: &Mat, labels_onehot: &Mat, mask: &[usize]) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::InvalidInput("loss mask is empty".into()));
    }
    let mut total = 0.0;
    for &i in mask {
        for j in 0..probs.cols() {
            let y = labels_onehot.get(i, j);
            if y > 0.0 {
                total -= y * probs.get(i, j).max(BCE_EPSILON).ln();
            }
        }
    }
    Ok(total / mask.len() as f64)
}

impl GcnModel {
    /// Glorot-uniform initialized model for `num_features` input columns.
    pub fn new(num_features: usize, config: GcnConfig) -> Result<GcnModel> {
        config.validate()?;
        if num_features == 0 {
            return Err(Error::InvalidInput("feature dimension must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let w1 = glorot(&mut rng, num_features, config.hidden_channels);
        let w2 = glorot(&mut rng, config.hidden_channels, config.output_channels);
        Ok(GcnModel {
            w1,
            w2,
            rng,
            config,
        })
    }

    pub fn config(&self) -> &GcnConfig {
        &self.config
    }

    pub fn w1(&self) -> &Mat {
        &self.w1
    }

    pub fn w2(&self) -> &Mat {
        &self.w2
    }

    /// Restores weights (checkpoint loading); shapes must match config.
    pub fn set_weights(&mut self, w1: Mat, w2: Mat) -> Result<()> {
        if w1.cols() != self.config.hidden_channels
            || w2.rows() != self.config.hidden_channels
            || w2.cols() != self.config.output_channels
            || w1.rows() != self.w1.rows()
        {
            return Err(Error::Shape(format!(
                "checkpoint weights {}x{} / {}x{} do not fit model {}x{} / {}x{}",
                w1.rows(),
                w1.cols(),
                w2.rows(),
                w2.cols(),
                self.w1.rows(),
                self.w1.cols(),
                self.w2.rows(),
                self.w2.cols()
            )));
        }
        self.w1 = w1;
        self.w2 = w2;
        Ok(())
    }

    fn dropout_mask(&mut self, rows: usize, cols: usize) -> Mat {
        let keep = 1.0 - self.config.dropout_rate;
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = if self.rng.random_range(0.0..1.0) < self.config.dropout_rate {
                    0.0
                } else {
                    1.0 / keep
                };
                m.set(i, j, v);
            }
        }
        m
    }

    /// Forward pass. `training` enables the configured dropout sites and
    /// draws fresh masks from the model's RNG stream.
    fn forward_pass(
        &mut self,
        adj: &NormalizedAdjacency,
        x: &Mat,
        training: bool,
    ) -> Result<Cache> {
        let a1 = x.matmul(&self.w1)?;
        let z1 = adj.matmul_dense(&a1)?;
        let h1 = z1.map(sigmoid);
        let dropping = training && self.config.dropout_rate > 0.0;
        let (d1, mask1) = if dropping && self.config.dropout_layers >= 1 {
            let m = self.dropout_mask(h1.rows(), h1.cols());
            (h1.hadamard(&m)?, Some(m))
        } else {
            (h1.clone(), None)
        };
        let a2 = d1.matmul(&self.w2)?;
        let z2 = adj.matmul_dense(&a2)?;
        match self.config.loss {
            LossKind::SigmoidBce => {
                let h2 = z2.map(sigmoid);
                let (probs, mask2) = if dropping && self.config.dropout_layers >= 2 {
                    let m = self.dropout_mask(h2.rows(), h2.cols());
                    (h2.hadamard(&m)?, Some(m))
                } else {
                    (h2.clone(), None)
                };
                Ok(Cache {
                    h1,
                    d1,
                    h2,
                    probs,
                    mask1,
                    mask2,
                })
            }
            LossKind::SoftmaxCrossEntropy => {
                let probs = softmax_rows(&z2);
                Ok(Cache {
                    h1,
                    d1,
                    h2: probs.clone(),
                    probs,
                    mask1,
                    mask2: None,
                })
            }
        }
    }

    /// Inference-mode outputs (sigmoid or softmax probabilities per node).
    pub fn forward(&self, adj: &NormalizedAdjacency, x: &Mat) -> Result<Mat> {
        // eval mode touches no RNG state; work on a shadow copy
        let mut shadow = GcnModel {
            w1: self.w1.clone(),
            w2: self.w2.clone(),
            rng: self.rng.clone(),
            config: self.config.clone(),
        };
        Ok(shadow.forward_pass(adj, x, false)?.probs)
    }

    /// Loss under inference-mode forward; the quantity the finite
    /// difference oracle probes.
    pub fn loss_eval(
        &self,
        adj: &NormalizedAdjacency,
        x: &Mat,
        labels_onehot: &Mat,
        mask: &[usize],
    ) -> Result<f64> {
        let probs = self.forward(adj, x)?;
        match self.config.loss {
            LossKind::SigmoidBce => bce_loss(&probs, labels_onehot, mask),
            LossKind::SoftmaxCrossEntropy => cross_entropy_loss(&probs, labels_onehot, mask),
        }
    }

    /// One forward/backward evaluation: the masked loss and the exact
    /// gradients of it with respect to both weight matrices. Dropout
    /// masks drawn during a training forward are replayed exactly.
    pub fn loss_and_gradients(
        &mut self,
        adj: &NormalizedAdjacency,
        x: &Mat,
        labels_onehot: &Mat,
        mask: &[usize],
        training: bool,
    ) -> Result<(f64, Mat, Mat)> {
        if mask.is_empty() {
            return Err(Error::InvalidInput("loss mask is empty".into()));
        }
        let cache = self.forward_pass(adj, x, training)?;
        let n = x.rows();
        let channels = self.config.output_channels;

        let (loss, g_z2) = match self.config.loss {
            LossKind::SigmoidBce => {
                let loss = bce_loss(&cache.probs, labels_onehot, mask)?;
                let scale = (mask.len() * channels) as f64;
                // d(loss)/d(probs), zero outside the mask and where the
                // clamp saturates
                let mut g_probs = Mat::zeros(n, channels);
                for &i in mask {
                    for j in 0..channels {
                        let p = cache.probs.get(i, j);
                        if p <= BCE_EPSILON || p >= 1.0 - BCE_EPSILON {
                            continue;
                        }
                        let y = labels_onehot.get(i, j);
                        g_probs.set(i, j, -(y / p - (1.0 - y) / (1.0 - p)) / scale);
                    }
                }
                let g_h2 = match &cache.mask2 {
                    Some(m) => g_probs.hadamard(m)?,
                    None => g_probs,
                };
                let sig_grad = cache.h2.map(|h| h * (1.0 - h));
                (loss, g_h2.hadamard(&sig_grad)?)
            }
            LossKind::SoftmaxCrossEntropy => {
                let loss = cross_entropy_loss(&cache.probs, labels_onehot, mask)?;
                let scale = mask.len() as f64;
                let mut g = Mat::zeros(n, channels);
                for &i in mask {
                    for j in 0..channels {
                        g.set(
                            i,
                            j,
                            (cache.probs.get(i, j) - labels_onehot.get(i, j)) / scale,
                        );
                    }
                }
                (loss, g)
            }
        };

        let g_a2 = adj.matmul_dense(&g_z2)?;
        let d_w2 = cache.d1.transpose().matmul(&g_a2)?;
        let g_d1 = g_a2.matmul(&self.w2.transpose())?;
        let g_h1 = match &cache.mask1 {
            Some(m) => g_d1.hadamard(m)?,
            None => g_d1,
        };
        let sig_grad1 = cache.h1.map(|h| h * (1.0 - h));
        let g_z1 = g_h1.hadamard(&sig_grad1)?;
        let g_a1 = adj.matmul_dense(&g_z1)?;
        let d_w1 = x.transpose().matmul(&g_a1)?;

        Ok((loss, d_w1, d_w2))
    }

    /// Full-batch gradient descent for the configured number of epochs.
    /// Returns the per-epoch training loss trace. Aborts with the epoch
    /// number if the loss or weights stop being finite.
    pub fn train(
        &mut self,
        adj: &NormalizedAdjacency,
        x: &Mat,
        labels: &[u8],
        masks: &FoldMasks,
    ) -> Result<Vec<f64>> {
        if labels.len() != x.rows() {
            return Err(Error::Shape(format!(
                "{} labels for {} feature rows",
                labels.len(),
                x.rows()
            )));
        }
        let targets = one_hot(labels, self.config.output_channels);
        let lr = self.config.learning_rate;
        let mut trace = Vec::with_capacity(self.config.epochs);
        for epoch in 0..self.config.epochs {
            let (loss, d_w1, d_w2) =
                self.loss_and_gradients(adj, x, &targets, &masks.train_idx, true)?;
            if !loss.is_finite() {
                return Err(Error::NonFinite { epoch });
            }
            self.w1 = self.w1.sub(&d_w1.scale(lr))?;
            self.w2 = self.w2.sub(&d_w2.scale(lr))?;
            if !self.w1.all_finite() || !self.w2.all_finite() {
                return Err(Error::NonFinite { epoch });
            }
            trace.push(loss);
        }
        Ok(trace)
    }

    /// Per-node class predictions: argmax over the output channels, ties
    /// going to class 1.
    pub fn predict(&self, adj: &NormalizedAdjacency, x: &Mat) -> Result<Vec<u8>> {
        let probs = self.forward(adj, x)?;
        Ok((0..probs.rows())
            .map(|i| u8::from(probs.get(i, 1) >= probs.get(i, 0)))
            .collect())
    }

    /// Probability of class 1 per node, the score fed to the ROC.
    pub fn scores(&self, adj: &NormalizedAdjacency, x: &Mat) -> Result<Vec<f64>> {
        let probs = self.forward(adj, x)?;
        Ok((0..probs.rows()).map(|i| probs.get(i, 1)).collect())
    }
}

fn glorot(rng: &mut ChaCha8Rng, fan_in: usize, fan_out: usize) -> Mat {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    let mut m = Mat::zeros(fan_in, fan_out);
    for i in 0..fan_in {
        for j in 0..fan_out {
            m.set(i, j, rng.random_range(-limit..limit));
        }
    }
    m
}
