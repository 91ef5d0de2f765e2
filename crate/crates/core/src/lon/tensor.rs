//! Dense and convolutional layers over `f64` buffers in channel-major (C, H, W)
//! layout, each with a forward pass and a hand-written backward pass.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Spatial shape of a feature map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape3 {
    pub c: usize,
    pub h: usize,
    pub w: usize,
}

impl Shape3 {
    pub const fn new(c: usize, h: usize, w: usize) -> Self {
        Shape3 { c, h, w }
    }

    pub fn len(&self) -> usize {
        self.c * self.h * self.w
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn glorot(rng: &mut impl Rng, n: usize, fan_in: usize, fan_out: usize) -> Vec<f64> {
    let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..n).map(|_| rng.random_range(-a..=a)).collect()
}

/// Square-kernel 2D convolution with zero padding.
#[derive(Clone, Debug, PartialEq)]
pub struct Conv2d {
    pub c_in: usize,
    pub c_out: usize,
    pub kernel: usize,
    pub stride: usize,
    pub pad: usize,
    /// `(c_out, c_in, kernel, kernel)` row-major.
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Conv2d {
    pub fn zeros(c_in: usize, c_out: usize, kernel: usize, stride: usize, pad: usize) -> Self {
        Conv2d { c_in, c_out, kernel, stride, pad, weight: vec![0.0; c_out * c_in * kernel * kernel], bias: vec![0.0; c_out] }
    }

    pub fn init(mut self, rng: &mut impl Rng) -> Self {
        let k2 = self.kernel * self.kernel;
        self.weight = glorot(rng, self.weight.len(), self.c_in * k2, self.c_out * k2);
        self
    }

    pub fn output_shape(&self, s: Shape3) -> Shape3 {
        let out = |n: usize| (n + 2 * self.pad - self.kernel) / self.stride + 1;
        Shape3::new(self.c_out, out(s.h), out(s.w))
    }

    /// Output positions `[lo, hi)` whose kernel tap `k` reads an input index
    /// `o * stride + k - pad` inside `[0, n_in)`.
    fn valid_outputs(&self, k: usize, n_in: usize, n_out: usize) -> (usize, usize) {
        let lo = self.pad.saturating_sub(k).div_ceil(self.stride);
        let hi = if n_in + self.pad > k { ((n_in + self.pad - k - 1) / self.stride + 1).min(n_out) } else { 0 };
        (lo, hi.max(lo))
    }

    pub fn forward(&self, x: &[f64], s: Shape3) -> (Vec<f64>, Shape3) {
        debug_assert_eq!(x.len(), s.len());
        debug_assert_eq!(s.c, self.c_in);
        let o = self.output_shape(s);
        let mut y = vec![0.0; o.len()];
        let k = self.kernel;
        for co in 0..self.c_out {
            let out = &mut y[co * o.h * o.w..(co + 1) * o.h * o.w];
            out.fill(self.bias[co]);
            for ci in 0..self.c_in {
                let inp = &x[ci * s.h * s.w..(ci + 1) * s.h * s.w];
                for ky in 0..k {
                    let (oy0, oy1) = self.valid_outputs(ky, s.h, o.h);
                    for kx in 0..k {
                        let wv = self.weight[((co * self.c_in + ci) * k + ky) * k + kx];
                        let (ox0, ox1) = self.valid_outputs(kx, s.w, o.w);
                        for oy in oy0..oy1 {
                            let iy = oy * self.stride + ky - self.pad;
                            let row = &inp[iy * s.w..(iy + 1) * s.w];
                            let orow = &mut out[oy * o.w..(oy + 1) * o.w];
                            for ox in ox0..ox1 {
                                orow[ox] += wv * row[ox * self.stride + kx - self.pad];
                            }
                        }
                    }
                }
            }
        }
        (y, o)
    }

    /// Accumulates parameter gradients into `grad` and returns the input gradient.
    pub fn backward(&self, x: &[f64], s: Shape3, dy: &[f64], grad: &mut Conv2d) -> Vec<f64> {
        let o = self.output_shape(s);
        debug_assert_eq!(dy.len(), o.len());
        let mut dx = vec![0.0; s.len()];
        let k = self.kernel;
        for co in 0..self.c_out {
            let g = &dy[co * o.h * o.w..(co + 1) * o.h * o.w];
            grad.bias[co] += g.iter().sum::<f64>();
            for ci in 0..self.c_in {
                let inp = &x[ci * s.h * s.w..(ci + 1) * s.h * s.w];
                let dinp = &mut dx[ci * s.h * s.w..(ci + 1) * s.h * s.w];
                for ky in 0..k {
                    let (oy0, oy1) = self.valid_outputs(ky, s.h, o.h);
                    for kx in 0..k {
                        let widx = ((co * self.c_in + ci) * k + ky) * k + kx;
                        let wv = self.weight[widx];
                        let (ox0, ox1) = self.valid_outputs(kx, s.w, o.w);
                        let mut gw = 0.0;
                        for oy in oy0..oy1 {
                            let iy = oy * self.stride + ky - self.pad;
                            let grow = &g[oy * o.w..(oy + 1) * o.w];
                            for ox in ox0..ox1 {
                                let ix = iy * s.w + ox * self.stride + kx - self.pad;
                                gw += grow[ox] * inp[ix];
                                dinp[ix] += wv * grow[ox];
                            }
                        }
                        grad.weight[widx] += gw;
                    }
                }
            }
        }
        dx
    }
}

/// Fully connected layer `y = W x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub n_in: usize,
    pub n_out: usize,
    /// `(n_out, n_in)` row-major.
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(n_in: usize, n_out: usize) -> Self {
        Dense { n_in, n_out, weight: vec![0.0; n_in * n_out], bias: vec![0.0; n_out] }
    }

    pub fn init(mut self, rng: &mut impl Rng) -> Self {
        self.weight = glorot(rng, self.weight.len(), self.n_in, self.n_out);
        self
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n_in);
        self.weight
            .chunks_exact(self.n_in)
            .zip(&self.bias)
            .map(|(row, b)| b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
            .collect()
    }

    pub fn backward(&self, x: &[f64], dy: &[f64], grad: &mut Dense) -> Vec<f64> {
        let mut dx = vec![0.0; self.n_in];
        for (o, &g) in dy.iter().enumerate() {
            grad.bias[o] += g;
            if g == 0.0 {
                continue;
            }
            let row = &self.weight[o * self.n_in..(o + 1) * self.n_in];
            let grow = &mut grad.weight[o * self.n_in..(o + 1) * self.n_in];
            for i in 0..self.n_in {
                grow[i] += g * x[i];
                dx[i] += g * row[i];
            }
        }
        dx
    }
}

pub fn relu_inplace(x: &mut [f64]) {
    for v in x {
        *v = v.max(0.0);
    }
}

/// Zeroes `dy` where the rectified output `y` was zero.
pub fn relu_backward_inplace(y: &[f64], dy: &mut [f64]) {
    for (g, &v) in dy.iter_mut().zip(y) {
        if v <= 0.0 {
            *g = 0.0;
        }
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean sigmoid cross-entropy over cells whose label is not `-1`, computed from
/// logits, together with its gradient. No labelled cells gives zero loss and gradient.
pub fn sigmoid_ce_with_logits(logits: &[f64], labels: &[i8]) -> (f64, Vec<f64>) {
    debug_assert_eq!(logits.len(), labels.len());
    let n = labels.iter().filter(|&&l| l >= 0).count();
    let mut grad = vec![0.0; logits.len()];
    if n == 0 {
        return (0.0, grad);
    }
    let mut loss = 0.0;
    for ((g, &z), &l) in grad.iter_mut().zip(logits).zip(labels) {
        if l < 0 {
            continue;
        }
        let y = l as f64;
        loss += z.max(0.0) - z * y + (-z.abs()).exp().ln_1p();
        *g = (sigmoid(z) - y) / n as f64;
    }
    (loss / n as f64, grad)
}
