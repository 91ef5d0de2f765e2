//! LaneOccupancyNet: predicts, for each cell of a candidate path, the probability
//! that the actor will occupy it within the horizon.
//!
//! Network, in parameter order (the same order is used for gradients and files):
//!
//! 1. conv block 1: 3x3 stride-2 convolutions with ReLU over the raster, giving a
//!    `C x h x w` latent map;
//! 2. projection: dense layer with ReLU from the normalized actor and path features
//!    to `C' * h * w` values, reshaped to `C' x h x w`, then a 1x1 convolution to `C`
//!    channels that is added to the latent map;
//! 3. conv block 2: 3x3 stride-1 convolutions with ReLU;
//! 4. head: flatten, hidden dense layers with ReLU, output dense layer of `L` logits,
//!    sigmoid.

pub mod features;
pub mod io;
pub mod tensor;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use features::{FeatureBundle, ACTOR_FEATURES, PATH_FEATURES};
use tensor::{relu_backward_inplace, relu_inplace, sigmoid, sigmoid_ce_with_logits, Conv2d, Dense, Shape3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LonConfig {
    /// Raster side, pixels.
    pub raster_size: usize,
    /// Meters per pixel.
    pub resolution: f64,
    /// Meters of raster behind the actor; the rest of the side lies ahead.
    pub behind_m: f64,
    pub block1_channels: Vec<usize>,
    pub block2_channels: Vec<usize>,
    pub projection_channels: usize,
    pub fc_widths: Vec<usize>,
    /// Output cells per path.
    pub num_cells: usize,
    pub learning_rate: f64,
    pub decay_factor: f64,
    pub decay_period: usize,
    pub iterations: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl LonConfig {
    /// 60 m at 0.2 m/px with the full-size network.
    pub fn full() -> Self {
        LonConfig {
            raster_size: 300,
            resolution: 0.2,
            behind_m: 10.0,
            block1_channels: vec![8, 16, 32, 32],
            block2_channels: vec![32, 32],
            projection_channels: 8,
            fc_widths: vec![2048, 1024],
            num_cells: 40,
            learning_rate: 1e-4,
            decay_factor: 0.9,
            decay_period: 11000,
            iterations: 50000,
            batch_size: 32,
            seed: 0,
        }
    }

    /// 60 m at 0.9375 m/px with a small network that trains on one CPU core in minutes.
    pub fn desk() -> Self {
        LonConfig {
            raster_size: 64,
            resolution: 0.9375,
            behind_m: 10.0,
            block1_channels: vec![4, 8, 16, 16],
            block2_channels: vec![16, 16],
            projection_channels: 4,
            fc_widths: vec![128, 64],
            num_cells: 40,
            learning_rate: 0.05,
            decay_factor: 0.9,
            decay_period: 1000,
            iterations: 4000,
            batch_size: 32,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = self.raster_size > 0
            && self.resolution > 0.0
            && self.behind_m >= 0.0
            && self.behind_m < self.raster_size as f64 * self.resolution
            && !self.block1_channels.is_empty()
            && self.block1_channels.iter().chain(&self.block2_channels).chain(&self.fc_widths).all(|&c| c > 0)
            && self.projection_channels > 0
            && self.num_cells > 0
            && self.learning_rate > 0.0
            && self.decay_factor > 0.0
            && self.decay_period > 0
            && self.batch_size > 0;
        if positive {
            Ok(())
        } else {
            Err(Error::Invalid(format!("bad network configuration {self:?}")))
        }
    }

    pub fn raster_shape(&self) -> Shape3 {
        Shape3::new(3, self.raster_size, self.raster_size)
    }

    pub fn feature_len(&self) -> usize {
        ACTOR_FEATURES + PATH_FEATURES
    }

    /// Learning rate in effect at zero-based `iteration`.
    pub fn learning_rate_at(&self, iteration: usize) -> f64 {
        self.learning_rate * self.decay_factor.powi((iteration / self.decay_period) as i32)
    }
}

/// All trainable tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct LonWeights {
    pub block1: Vec<Conv2d>,
    pub projection_fc: Dense,
    pub projection_conv: Conv2d,
    pub block2: Vec<Conv2d>,
    /// Hidden layers followed by the output layer.
    pub head: Vec<Dense>,
}

impl LonWeights {
    fn build(cfg: &LonConfig, mut init: impl FnMut(Conv2d) -> Conv2d, mut init_d: impl FnMut(Dense) -> Dense) -> (Self, Shape3) {
        let mut shape = cfg.raster_shape();
        let mut block1 = Vec::new();
        for &c in &cfg.block1_channels {
            let conv = init(Conv2d::zeros(shape.c, c, 3, 2, 1));
            shape = conv.output_shape(shape);
            block1.push(conv);
        }
        let latent = shape;
        let spatial = latent.h * latent.w;
        let projection_fc = init_d(Dense::zeros(cfg.feature_len(), cfg.projection_channels * spatial));
        let projection_conv = init(Conv2d::zeros(cfg.projection_channels, latent.c, 1, 1, 0));
        let mut block2 = Vec::new();
        for &c in &cfg.block2_channels {
            let conv = init(Conv2d::zeros(shape.c, c, 3, 1, 1));
            shape = conv.output_shape(shape);
            block2.push(conv);
        }
        let mut head = Vec::new();
        let mut n = shape.len();
        for &w in cfg.fc_widths.iter().chain(std::iter::once(&cfg.num_cells)) {
            head.push(init_d(Dense::zeros(n, w)));
            n = w;
        }
        (LonWeights { block1, projection_fc, projection_conv, block2, head }, latent)
    }

    pub fn zeros(cfg: &LonConfig) -> Self {
        Self::build(cfg, |c| c, |d| d).0
    }

    /// Uniform Glorot weights, zero biases.
    pub fn random(cfg: &LonConfig, seed: u64) -> Self {
        let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(seed));
        Self::build(cfg, |c| c.init(&mut *rng.borrow_mut()), |d| d.init(&mut *rng.borrow_mut())).0
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for t in z.tensors_mut() {
            t.fill(0.0);
        }
        z
    }

    /// Weight then bias of every layer, in network order.
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut out: Vec<&[f64]> = Vec::new();
        for c in &self.block1 {
            out.extend([c.weight.as_slice(), c.bias.as_slice()]);
        }
        out.extend([self.projection_fc.weight.as_slice(), self.projection_fc.bias.as_slice()]);
        out.extend([self.projection_conv.weight.as_slice(), self.projection_conv.bias.as_slice()]);
        for c in &self.block2 {
            out.extend([c.weight.as_slice(), c.bias.as_slice()]);
        }
        for d in &self.head {
            out.extend([d.weight.as_slice(), d.bias.as_slice()]);
        }
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Vec<f64>> {
        let mut out = Vec::new();
        for c in &mut self.block1 {
            out.extend([&mut c.weight, &mut c.bias]);
        }
        out.extend([&mut self.projection_fc.weight, &mut self.projection_fc.bias]);
        out.extend([&mut self.projection_conv.weight, &mut self.projection_conv.bias]);
        for c in &mut self.block2 {
            out.extend([&mut c.weight, &mut c.bias]);
        }
        for d in &mut self.head {
            out.extend([&mut d.weight, &mut d.bias]);
        }
        out
    }

    pub fn num_parameters(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// `self += scale * other`.
    pub fn axpy(&mut self, scale: f64, other: &LonWeights) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += scale * y;
            }
        }
    }
}

/// Intermediate activations kept for the backward pass.
pub struct ForwardCache {
    input: Vec<f64>,
    features: Vec<f64>,
    block1: Vec<(Vec<f64>, Shape3)>,
    projection_hidden: Vec<f64>,
    block2: Vec<(Vec<f64>, Shape3)>,
    head: Vec<Vec<f64>>,
    pub logits: Vec<f64>,
}

/// Trained network plus the feature normalization learnt from its training set.
#[derive(Clone, Debug, PartialEq)]
pub struct LonModel {
    pub config: LonConfig,
    pub weights: LonWeights,
    pub feature_mean: Vec<f64>,
    pub feature_std: Vec<f64>,
}

impl LonModel {
    /// Randomly initialized network with identity feature normalization.
    pub fn new(config: LonConfig) -> Result<Self> {
        config.validate()?;
        let weights = LonWeights::random(&config, config.seed);
        let n = config.feature_len();
        Ok(LonModel { config, weights, feature_mean: vec![0.0; n], feature_std: vec![1.0; n] })
    }

    fn latent_shape(&self) -> Shape3 {
        LonWeights::build(&self.config, |c| c, |d| d).1
    }

    fn check_input(&self, x: &FeatureBundle) -> Result<()> {
        let want = self.config.raster_shape().len();
        if x.raster.len() != want || x.actor.len() != ACTOR_FEATURES || x.path.len() != PATH_FEATURES {
            return Err(Error::Shape(format!(
                "input has raster {}, actor {}, path {}; model expects {want}, {ACTOR_FEATURES}, {PATH_FEATURES}",
                x.raster.len(),
                x.actor.len(),
                x.path.len()
            )));
        }
        if x.actor.iter().chain(&x.path).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite feature".into()));
        }
        Ok(())
    }

    fn normalized_features(&self, x: &FeatureBundle) -> Vec<f64> {
        x.vector()
            .iter()
            .zip(self.feature_mean.iter().zip(&self.feature_std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    /// Forward pass from a `[0, 1]` raster and normalized features, returning logits.
    pub fn forward_raw(&self, input: Vec<f64>, features: Vec<f64>) -> ForwardCache {
        let w = &self.weights;
        let mut shape = self.config.raster_shape();
        let mut x = input.clone();
        let mut block1 = Vec::with_capacity(w.block1.len());
        for conv in &w.block1 {
            let (mut y, s) = conv.forward(&x, shape);
            relu_inplace(&mut y);
            block1.push((y.clone(), s));
            x = y;
            shape = s;
        }
        let mut projection_hidden = w.projection_fc.forward(&features);
        relu_inplace(&mut projection_hidden);
        let proj_shape = Shape3::new(self.config.projection_channels, shape.h, shape.w);
        let (projected, _) = w.projection_conv.forward(&projection_hidden, proj_shape);
        for (a, b) in x.iter_mut().zip(&projected) {
            *a += b;
        }
        let mut block2 = Vec::with_capacity(w.block2.len() + 1);
        block2.push((x.clone(), shape));
        for conv in &w.block2 {
            let (mut y, s) = conv.forward(&x, shape);
            relu_inplace(&mut y);
            block2.push((y.clone(), s));
            x = y;
            shape = s;
        }
        let mut head = Vec::with_capacity(w.head.len());
        head.push(x.clone());
        let last = w.head.len() - 1;
        for (i, d) in w.head.iter().enumerate() {
            let mut y = d.forward(&x);
            if i < last {
                relu_inplace(&mut y);
                head.push(y.clone());
            }
            x = y;
        }
        ForwardCache { input, features, block1, projection_hidden, block2, head, logits: x }
    }

    /// Accumulates into `grad` the gradient of a loss whose derivative with respect
    /// to the logits is `dlogits`, and returns the gradient with respect to the
    /// normalized features.
    pub fn backward(&self, cache: &ForwardCache, dlogits: &[f64], grad: &mut LonWeights) -> Vec<f64> {
        let w = &self.weights;
        let mut g = dlogits.to_vec();
        for i in (0..w.head.len()).rev() {
            g = w.head[i].backward(&cache.head[i], &g, &mut grad.head[i]);
            if i > 0 {
                relu_backward_inplace(&cache.head[i], &mut g);
            }
        }
        for i in (0..w.block2.len()).rev() {
            relu_backward_inplace(&cache.block2[i + 1].0, &mut g);
            let (x, s) = &cache.block2[i];
            g = w.block2[i].backward(x, *s, &g, &mut grad.block2[i]);
        }
        // `g` is now the gradient at the fused latent map: it flows unchanged into
        // both the conv block 1 output and the projection branch.
        let latent = self.latent_shape();
        let proj_shape = Shape3::new(self.config.projection_channels, latent.h, latent.w);
        let mut dhidden =
            w.projection_conv.backward(&cache.projection_hidden, proj_shape, &g, &mut grad.projection_conv);
        relu_backward_inplace(&cache.projection_hidden, &mut dhidden);
        let dfeatures = w.projection_fc.backward(&cache.features, &dhidden, &mut grad.projection_fc);
        for i in (0..w.block1.len()).rev() {
            relu_backward_inplace(&cache.block1[i].0, &mut g);
            let (x, s) = if i == 0 { (&cache.input, self.config.raster_shape()) } else { (&cache.block1[i - 1].0, cache.block1[i - 1].1) };
            g = w.block1[i].backward(x, s, &g, &mut grad.block1[i]);
        }
        dfeatures
    }

    fn prepare(&self, x: &FeatureBundle) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_input(x)?;
        Ok((x.raster.iter().map(|&v| v as f64 / 255.0).collect(), self.normalized_features(x)))
    }

    /// Per-cell occupancy probabilities in `(0, 1)`.
    pub fn forward(&self, x: &FeatureBundle) -> Result<Vec<f64>> {
        let (input, features) = self.prepare(x)?;
        Ok(self.forward_raw(input, features).logits.into_iter().map(sigmoid).collect())
    }

    /// Loss on one sample and its gradient accumulated into `grad`.
    pub fn loss_and_gradient(&self, x: &FeatureBundle, labels: &[i8], grad: &mut LonWeights) -> Result<f64> {
        if labels.len() != self.config.num_cells {
            return Err(Error::Shape(format!("{} labels for {} cells", labels.len(), self.config.num_cells)));
        }
        let (input, features) = self.prepare(x)?;
        let cache = self.forward_raw(input, features);
        let (loss, dlogits) = sigmoid_ce_with_logits(&cache.logits, labels);
        if dlogits.iter().any(|&g| g != 0.0) {
            self.backward(&cache, &dlogits, grad);
        }
        Ok(loss)
    }

    /// Sets the feature normalization to the per-feature mean and standard deviation
    /// of `samples`. Constant features keep unit scale.
    pub fn fit_normalization<'a>(&mut self, samples: impl IntoIterator<Item = &'a FeatureBundle>) {
        let n_f = self.config.feature_len();
        let (mut sum, mut sum_sq, mut n) = (vec![0.0; n_f], vec![0.0; n_f], 0usize);
        for s in samples {
            for (i, v) in s.vector().into_iter().enumerate() {
                sum[i] += v;
                sum_sq[i] += v * v;
            }
            n += 1;
        }
        if n == 0 {
            return;
        }
        for i in 0..n_f {
            let mean = sum[i] / n as f64;
            let var = (sum_sq[i] / n as f64 - mean * mean).max(0.0);
            self.feature_mean[i] = mean;
            self.feature_std[i] = if var.sqrt() > 1e-9 { var.sqrt() } else { 1.0 };
        }
    }
}

/// Mean binary cross-entropy of probabilities `pred` against labels, skipping `-1` cells.
pub fn lon_loss(pred: &[f64], labels: &[i8]) -> Result<f64> {
    if pred.len() != labels.len() {
        return Err(Error::Shape(format!("{} predictions for {} labels", pred.len(), labels.len())));
    }
    let (mut sum, mut n) = (0.0, 0usize);
    for (&p, &l) in pred.iter().zip(labels) {
        match l {
            1 => sum -= p.ln(),
            0 => sum -= (1.0 - p).ln(),
            _ => continue,
        }
        n += 1;
    }
    Ok(if n == 0 { 0.0 } else { sum / n as f64 })
}

/// A training example.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    /// Free-form provenance, e.g. `scenario/actor/t0/path`.
    pub key: String,
    pub input: FeatureBundle,
    pub labels: Vec<i8>,
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    /// Mean batch loss at every iteration.
    pub losses: Vec<f64>,
}

/// Minibatch gradient descent on the mean per-sample loss.
///
/// Batches are drawn from a seeded shuffle of the dataset that is redrawn every
/// epoch; the learning rate is multiplied by `decay_factor` every `decay_period`
/// iterations. `progress` sees `(iteration, loss)` after each step.
pub fn lon_train(
    samples: &[Sample],
    config: &LonConfig,
    mut progress: impl FnMut(usize, f64),
) -> Result<(LonModel, TrainReport)> {
    if samples.is_empty() {
        return Err(Error::Invalid("empty training set".into()));
    }
    let mut model = LonModel::new(config.clone())?;
    model.fit_normalization(samples.iter().map(|s| &s.input));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_0f_5a3b1e5);
    let mut order: Vec<usize> = (0..samples.len()).collect();
    let mut cursor = order.len();
    let mut grad = model.weights.zeros_like();
    let mut losses = Vec::with_capacity(config.iterations);
    for it in 0..config.iterations {
        for t in grad.tensors_mut() {
            t.fill(0.0);
        }
        let mut batch_loss = 0.0;
        for _ in 0..config.batch_size {
            if cursor == order.len() {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let s = &samples[order[cursor]];
            cursor += 1;
            batch_loss += model.loss_and_gradient(&s.input, &s.labels, &mut grad)?;
        }
        let b = config.batch_size as f64;
        batch_loss /= b;
        if !batch_loss.is_finite() {
            return Err(Error::Diverged { iteration: it, loss: batch_loss });
        }
        model.weights.axpy(-config.learning_rate_at(it) / b, &grad);
        losses.push(batch_loss);
        progress(it, batch_loss);
    }
    Ok((model, TrainReport { losses }))
}

/// Which part of the network a checked parameter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerKind {
    Conv,
    Dense,
    /// Projection branch whose output is added to the latent scene map.
    Fusion,
}

/// Indices into [`LonWeights::tensors`] that belong to `kind`.
pub fn tensors_of_kind(w: &LonWeights, kind: LayerKind) -> Vec<usize> {
    let n1 = 2 * w.block1.len();
    let n2 = 2 * w.block2.len();
    let (fusion, after) = (n1..n1 + 4, n1 + 4);
    match kind {
        LayerKind::Conv => (0..n1).chain(after..after + n2).collect(),
        LayerKind::Fusion => fusion.collect(),
        LayerKind::Dense => (after + n2..after + n2 + 2 * w.head.len()).collect(),
    }
}

/// Analytic and central-difference gradients of the sample loss with respect to
/// parameter `index` of tensor `tensor`.
pub fn finite_difference_pair(model: &LonModel, x: &FeatureBundle, labels: &[i8], tensor: usize, index: usize, eps: f64) -> Result<(f64, f64)> {
    let mut grad = model.weights.zeros_like();
    model.loss_and_gradient(x, labels, &mut grad)?;
    let analytic = grad.tensors()[tensor][index];
    let mut probe = model.clone();
    let base = model.weights.tensors()[tensor][index];
    let mut scratch = probe.weights.zeros_like();
    probe.weights.tensors_mut()[tensor][index] = base + eps;
    let up = probe.loss_and_gradient(x, labels, &mut scratch)?;
    probe.weights.tensors_mut()[tensor][index] = base - eps;
    let down = probe.loss_and_gradient(x, labels, &mut scratch)?;
    Ok((analytic, (up - down) / (2.0 * eps)))
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_error(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
