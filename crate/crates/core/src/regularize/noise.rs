use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::norm2;

/// How noise coefficients `n_k` are shaped before rescaling to `‖n‖ = δε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseMode {
    /// i.i.d. standard normal on the first `k_noise` modes (all modes if `None`).
    Flat { k_noise: Option<usize> },
    /// `n_k ∝ λ_k ξ_k`, so `n_k / λ_k` stays square-summable.
    RangeCompatible,
}

impl Default for NoiseMode {
    fn default() -> Self {
        Self::Flat { k_noise: None }
    }
}

/// Derives the `stream`-th sub-seed of `seed` (SplitMix64 of
/// `seed + stream · 0x9E3779B97F4A7C15`).
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded noise coefficients, one per eigenvalue, with `‖n‖₂ = δ·eps` and
/// `δ ~ U[0.5, 1]`.
pub fn make_noise(seed: u64, eps: f64, mode: NoiseMode, eigenvalues: &[f64]) -> Result<Vec<f64>> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return invalid(format!("noise level must be non-negative, got {eps}"));
    }
    let n = eigenvalues.len();
    if eps == 0.0 || n == 0 {
        return Ok(vec![0.0; n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta: f64 = rng.random_range(0.5..=1.0);
    let mut noise: Vec<f64> = match mode {
        NoiseMode::Flat { k_noise } => {
            let active = k_noise.unwrap_or(n).min(n);
            (0..n)
                .map(|k| {
                    let xi: f64 = rng.sample(StandardNormal);
                    if k < active {
                        xi
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        NoiseMode::RangeCompatible => eigenvalues
            .iter()
            .map(|lam| lam * rng.sample::<f64, _>(StandardNormal))
            .collect(),
    };
    let norm = norm2(&noise);
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = delta * eps;
    noise.iter_mut().for_each(|x| *x *= target / norm);
    let after = norm2(&noise);
    if after > eps {
        noise.iter_mut().for_each(|x| *x *= eps / after);
    }
    Ok(noise)
}
