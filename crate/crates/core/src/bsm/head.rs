//! Two-layer regression head: `sigmoid(w₂ · relu(W₁ᵀx + b₁) + b₂)`.
//!
//! Parameters live in one flat buffer laid out as `W₁` (row-major `d × 256`),
//! `b₁` (256), `w₂` (256), `b₂` (1). Gradients use the same layout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HIDDEN: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsmParams {
    dim: usize,
    values: Vec<f64>,
}

/// Gradient buffer with the same layout as [`BsmParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct HeadGrad(pub Vec<f64>);

/// Intermediate values of one forward pass, kept for backprop.
#[derive(Debug, Clone)]
pub struct Activation {
    hidden: Vec<f64>,
    mask: Option<Vec<f64>>,
    pub output: f64,
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn param_count(dim: usize) -> usize {
    dim * HIDDEN + HIDDEN + HIDDEN + 1
}

impl BsmParams {
    pub fn zeros(dim: usize) -> Self {
        BsmParams {
            dim,
            values: vec![0.0; param_count(dim)],
        }
    }

    /// Uniform fan-in initialisation `U(−1/√fan_in, 1/√fan_in)` for weights,
    /// zero biases.
    pub fn init(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = BsmParams::zeros(dim);
        let b1 = 1.0 / (dim as f64).sqrt();
        for w in p.w1_mut() {
            *w = rng.random_range(-b1..b1);
        }
        let b2 = 1.0 / (HIDDEN as f64).sqrt();
        for w in p.w2_mut() {
            *w = rng.random_range(-b2..b2);
        }
        p
    }

    pub fn from_parts(
        dim: usize,
        layer1_weights: Vec<f64>,
        layer1_bias: Vec<f64>,
        layer2_weights: Vec<f64>,
        layer2_bias: f64,
    ) -> Result<Self> {
        if layer1_weights.len() != dim * HIDDEN
            || layer1_bias.len() != HIDDEN
            || layer2_weights.len() != HIDDEN
        {
            return Err(Error::Config(format!(
                "parameter shapes do not match d={dim}, hidden={HIDDEN}"
            )));
        }
        let mut values = layer1_weights;
        values.extend(layer1_bias);
        values.extend(layer2_weights);
        values.push(layer2_bias);
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite parameter value".into()));
        }
        Ok(BsmParams { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn w1(&self) -> &[f64] {
        &self.values[..self.dim * HIDDEN]
    }

    pub fn b1(&self) -> &[f64] {
        let o = self.dim * HIDDEN;
        &self.values[o..o + HIDDEN]
    }

    pub fn w2(&self) -> &[f64] {
        let o = self.dim * HIDDEN + HIDDEN;
        &self.values[o..o + HIDDEN]
    }

    pub fn b2(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    fn w1_mut(&mut self) -> &mut [f64] {
        let n = self.dim * HIDDEN;
        &mut self.values[..n]
    }

    fn w2_mut(&mut self) -> &mut [f64] {
        let o = self.dim * HIDDEN + HIDDEN;
        &mut self.values[o..o + HIDDEN]
    }

    pub fn set_b2(&mut self, b: f64) {
        let n = self.values.len();
        self.values[n - 1] = b;
    }

    pub fn zero_grad(&self) -> HeadGrad {
        HeadGrad(vec![0.0; self.values.len()])
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Config(format!(
                "embedding has dimension {} but the head expects {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Deterministic inference.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        Ok(self.forward_train(x, None)?.output)
    }

    /// Forward pass with an optional inverted-dropout mask over the hidden
    /// layer (entries 0 or 1/(1−p)).
    pub fn forward_train(&self, x: &[f64], mask: Option<Vec<f64>>) -> Result<Activation> {
        self.check_dim(x)?;
        let w1 = self.w1();
        let mut hidden = self.b1().to_vec();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let row = &w1[i * HIDDEN..(i + 1) * HIDDEN];
            for (h, &w) in hidden.iter_mut().zip(row) {
                *h += xi * w;
            }
        }
        for h in hidden.iter_mut() {
            *h = h.max(0.0);
        }
        let mut z = self.b2();
        match &mask {
            Some(m) => {
                for ((h, w), k) in hidden.iter().zip(self.w2()).zip(m) {
                    z += h * w * k;
                }
            }
            None => {
                for (h, w) in hidden.iter().zip(self.w2()) {
                    z += h * w;
                }
            }
        }
        Ok(Activation {
            hidden,
            mask,
            output: sigmoid(z),
        })
    }

    /// Adds `d_out · ∂output/∂θ` into `grad`.
    pub fn backward(&self, x: &[f64], act: &Activation, d_out: f64, grad: &mut HeadGrad) {
        let s = act.output;
        let dz = d_out * s * (1.0 - s);
        if dz == 0.0 {
            return;
        }
        let o1 = self.dim * HIDDEN;
        let o2 = o1 + HIDDEN;
        let g = &mut grad.0;
        let last = g.len() - 1;
        g[last] += dz;
        let w2 = self.w2();
        for j in 0..HIDDEN {
            let h = act.hidden[j];
            if h <= 0.0 {
                continue;
            }
            let k = act.mask.as_ref().map_or(1.0, |m| m[j]);
            g[o2 + j] += dz * h * k;
            let dh = dz * w2[j] * k;
            g[o1 + j] += dh;
            for (i, &xi) in x.iter().enumerate() {
                g[i * HIDDEN + j] += xi * dh;
            }
        }
    }
}

impl HeadGrad {
    pub fn scale(&mut self, k: f64) {
        for g in &mut self.0 {
            *g *= k;
        }
    }

    pub fn add_assign(&mut self, other: &HeadGrad) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn clear(&mut self) {
        self.0.iter_mut().for_each(|g| *g = 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_head_scores_half() {
        let p = BsmParams::zeros(8);
        assert_eq!(p.forward(&[1.0; 8]).unwrap(), 0.5);
    }

    #[test]
    fn output_bias_ten() {
        let mut p = BsmParams::zeros(4);
        p.set_b2(10.0);
        let s = p.forward(&[0.3; 4]).unwrap();
        // logistic(10) = 1/(1+e^-10) ≈ 0.9999546
        assert!(s > 0.99);
        assert!((s - 1.0 / (1.0 + (-10.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let p = BsmParams::zeros(32);
        assert!(matches!(p.forward(&[0.0; 16]), Err(Error::Config(_))));
    }

    #[test]
    fn init_is_seeded() {
        assert_eq!(BsmParams::init(4, 7), BsmParams::init(4, 7));
        assert_ne!(BsmParams::init(4, 7), BsmParams::init(4, 8));
        assert!(BsmParams::init(4, 7).b1().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn backward_matches_finite_differences() {
        let p = BsmParams::init(3, 11);
        let x = [0.4, -1.2, 0.7];
        let act = p.forward_train(&x, None).unwrap();
        let mut g = p.zero_grad();
        p.backward(&x, &act, 1.0, &mut g);
        let h = 1e-6;
        for idx in (0..p.values().len()).step_by(37).chain([p.values().len() - 1]) {
            let mut up = p.clone();
            up.values_mut()[idx] += h;
            let mut dn = p.clone();
            dn.values_mut()[idx] -= h;
            let fd = (up.forward(&x).unwrap() - dn.forward(&x).unwrap()) / (2.0 * h);
            assert!((fd - g.0[idx]).abs() < 1e-7, "param {idx}: {fd} vs {}", g.0[idx]);
        }
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(-800.0), 0.0);
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(0.0), 0.5);
    }
}
