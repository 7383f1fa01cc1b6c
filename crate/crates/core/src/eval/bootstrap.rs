//! Bias-corrected and accelerated (BCa) bootstrap intervals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub point: f64,
    pub low: f64,
    pub high: f64,
    /// Set when the statistic did not vary across resamples and the
    /// interval collapsed to the point estimate.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub n_resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            n_resamples: 10_000,
            level: 0.95,
            seed: 0,
        }
    }
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Empirical quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Draws the bootstrap replicates of `statistic`. Resamples on which the
/// statistic is not finite are dropped.
pub fn replicates<T: Clone>(
    data: &[T],
    statistic: impl Fn(&[T]) -> f64,
    n_resamples: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = Vec::with_capacity(data.len());
    let mut out = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        buf.clear();
        buf.extend((0..data.len()).map(|_| data[rng.random_range(0..data.len())].clone()));
        let s = statistic(&buf);
        if s.is_finite() {
            out.push(s);
        }
    }
    out
}

/// Percentile interval from the same replicates a BCa call with this seed
/// would draw.
pub fn percentile_ci<T: Clone>(
    data: &[T],
    statistic: impl Fn(&[T]) -> f64,
    cfg: BootstrapConfig,
) -> Result<(f64, f64)> {
    let mut reps = replicates(data, statistic, cfg.n_resamples, cfg.seed);
    if reps.is_empty() {
        return Err(Error::InvalidInput("statistic undefined on every resample".into()));
    }
    reps.sort_by(f64::total_cmp);
    let alpha = (1.0 - cfg.level) / 2.0;
    Ok((quantile(&reps, alpha), quantile(&reps, 1.0 - alpha)))
}

/// BCa interval for `statistic` over `data`, with jackknife acceleration.
/// Deterministic for a fixed seed.
pub fn bootstrap_ci<T: Clone>(
    data: &[T],
    statistic: impl Fn(&[T]) -> f64,
    cfg: BootstrapConfig,
) -> Result<Interval> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InvalidInput("bootstrap needs at least 2 records".into()));
    }
    if !(cfg.level > 0.0 && cfg.level < 1.0) {
        return Err(Error::range("confidence level", cfg.level));
    }
    if cfg.n_resamples == 0 {
        return Err(Error::InvalidInput("n_resamples must be positive".into()));
    }
    let point = statistic(data);
    if !point.is_finite() {
        return Err(Error::InvalidInput("statistic is undefined on the full sample".into()));
    }
    let mut reps = replicates(data, &statistic, cfg.n_resamples, cfg.seed);
    if reps.is_empty() {
        return Err(Error::InvalidInput("statistic undefined on every resample".into()));
    }
    reps.sort_by(f64::total_cmp);
    if reps[0] == reps[reps.len() - 1] && reps[0] == point {
        return Ok(Interval {
            point,
            low: point,
            high: point,
            degenerate: true,
        });
    }

    let b = reps.len() as f64;
    let below = reps.iter().filter(|&&r| r < point).count() as f64;
    let ties = reps.iter().filter(|&&r| r == point).count() as f64;
    let prop = ((below + 0.5 * ties) / b).clamp(0.5 / b, 1.0 - 0.5 / b);
    let normal = std_normal();
    let z0 = normal.inverse_cdf(prop);

    let mut held_out = Vec::with_capacity(n - 1);
    let jack: Vec<f64> = (0..n)
        .map(|i| {
            held_out.clear();
            held_out.extend(data[..i].iter().chain(&data[i + 1..]).cloned());
            statistic(&held_out)
        })
        .filter(|s| s.is_finite())
        .collect();
    let accel = if jack.len() < 2 {
        0.0
    } else {
        let mean = jack.iter().sum::<f64>() / jack.len() as f64;
        let (s2, s3) = jack.iter().fold((0.0, 0.0), |(s2, s3), j| {
            let d = mean - j;
            (s2 + d * d, s3 + d * d * d)
        });
        if s2 > 0.0 {
            s3 / (6.0 * s2.powf(1.5))
        } else {
            0.0
        }
    };

    let alpha = (1.0 - cfg.level) / 2.0;
    let adjust = |a: f64| {
        let z = normal.inverse_cdf(a);
        let w = z0 + z;
        normal.cdf(z0 + w / (1.0 - accel * w))
    };
    Ok(Interval {
        point,
        low: quantile(&reps, adjust(alpha)),
        high: quantile(&reps, adjust(1.0 - alpha)),
        degenerate: false,
    })
}
