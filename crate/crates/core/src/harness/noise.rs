//! Additive Gaussian measurement noise and its report metrics.
//!
//! The generator is a 64-bit splitmix counter hash (deterministic across
//! platforms and thread counts) feeding Marsaglia's polar method; draws are
//! consumed in row-major order of the data matrix so noisy datasets are
//! bit-reproducible for a fixed seed.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use serde::{Deserialize, Serialize};

/// splitmix64: output = avalanche hash of an incrementing counter.
#[derive(Debug, Clone)]
pub struct NoiseRng {
    state: u64,
    spare: Option<f64>,
}

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via the polar method; the second variate of each
    /// accepted pair is cached.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }
}

/// Per-level noise summary. sigma = mu * max|u| exactly; the norms are the
/// root-mean-square values over all survey pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseReport {
    pub mu: f64,
    pub sigma: f64,
    pub data_norm: f64,
    pub noise_norm: f64,
}

/// |u|_noise = |u| + sigma * eps with sigma = mu * max|u| and eps iid
/// standard normal. Entries may go negative and are kept as-is: the imaging
/// functional squares the magnitudes, and clamping would bias the noise.
pub fn add_noise(magnitude: &Matrix<f64>, mu: f64, rng: &mut NoiseRng) -> Result<Matrix<f64>> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("noise level {mu} must be >= 0")));
    }
    let sigma = mu * magnitude.max_abs();
    let mut out = magnitude.clone();
    for r in 0..out.rows() {
        for s in 0..out.cols() {
            out[(r, s)] += sigma * rng.standard_normal();
        }
    }
    Ok(out)
}

/// Noise metrics as reported in the benchmark tables.
pub fn noise_metrics(
    clean: &Matrix<f64>,
    noisy: &Matrix<f64>,
    mu: f64,
) -> Result<NoiseReport> {
    if !clean.same_shape(noisy) {
        return Err(Error::ShapeMismatch(format!(
            "clean is {}x{}, noisy is {}x{}",
            clean.rows(),
            clean.cols(),
            noisy.rows(),
            noisy.cols()
        )));
    }
    let n = (clean.rows() * clean.cols()) as f64;
    let sigma = mu * clean.max_abs();
    let data_norm = (clean.data().iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let noise_norm = (clean
        .data()
        .iter()
        .zip(noisy.data())
        .map(|(c, y)| (y - c) * (y - c))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(NoiseReport { mu, sigma, data_norm, noise_norm })
}
