use serde::{Deserialize, Serialize};

use super::problem::ProblemInstance;
use crate::error::{invalid, Error, Result};
use crate::numeric::require_non_increasing;

/// Which truncation rule picks the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// `λ_k ≥ ε/E`: the regularized solution `f₁`.
    K1,
    /// `λ_k ≥ (ε/E) β_k`: the regularized solution `f₂`.
    K2,
}

fn check_args(eigenvalues: &[f64], eps: f64, e_bound: f64) -> Result<Vec<f64>> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return invalid(format!("eps must be non-negative, got {eps}"));
    }
    if !(e_bound > 0.0 && e_bound.is_finite()) {
        return invalid(format!("E must be positive, got {e_bound}"));
    }
    let moduli: Vec<f64> = eigenvalues.iter().map(|l| l.abs()).collect();
    require_non_increasing(&moduli, "eigenvalue moduli")?;
    Ok(moduli)
}

/// Largest `k` with `|λ_k| ≥ ε/E`, or 0.
///
/// ```
/// let lam = fredholm::kernels::triangular_eigenvalues(100);
/// assert_eq!(fredholm::regularize::truncation_k1(&lam, 1e-2, 1.0).unwrap(), 3);
/// ```
pub fn truncation_k1(eigenvalues: &[f64], eps: f64, e_bound: f64) -> Result<usize> {
    let moduli = check_args(eigenvalues, eps, e_bound)?;
    let threshold = eps / e_bound;
    Ok(moduli.iter().rposition(|&l| l >= threshold).map_or(0, |k| k + 1))
}

/// Largest `k` with `|λ_k| ≥ (ε/E) β_k`, or 0.
pub fn truncation_k2(eigenvalues: &[f64], beta: &[f64], eps: f64, e_bound: f64) -> Result<usize> {
    let moduli = check_args(eigenvalues, eps, e_bound)?;
    if beta.len() < moduli.len() {
        return invalid(format!("{} beta values for {} eigenvalues", beta.len(), moduli.len()));
    }
    let ratio = eps / e_bound;
    Ok(moduli
        .iter()
        .zip(beta)
        .rposition(|(&l, &b)| l >= ratio * b)
        .map_or(0, |k| k + 1))
}

/// A truncated eigenfunction expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub rule: Rule,
    pub cutoff: usize,
    /// `f̂_k = ḡ_k / λ_k` for `k ≤ cutoff`, else 0.
    pub coefficients: Vec<f64>,
    /// The projected data `ḡ_k` for `k ≤ cutoff`, else 0.
    pub data_projection: Vec<f64>,
}

/// The cutoff `rule` selects for `instance`.
pub fn cutoff(instance: &ProblemInstance, rule: Rule) -> Result<usize> {
    match rule {
        Rule::K1 => truncation_k1(&instance.eigenvalues, instance.eps, instance.e_bound),
        Rule::K2 => truncation_k2(&instance.eigenvalues, &instance.beta, instance.eps, instance.e_bound),
    }
}

/// Inverts the data on the modes retained by `rule`.
pub fn truncated_solution(instance: &ProblemInstance, rule: Rule) -> Result<Reconstruction> {
    let cutoff = cutoff(instance, rule)?;
    invert_projection(&instance.eigenvalues, &instance.g_noisy, rule, cutoff)
}

/// Inverts `data` on the first `cutoff` modes.
pub fn invert_projection(eigenvalues: &[f64], data: &[f64], rule: Rule, cutoff: usize) -> Result<Reconstruction> {
    let n = eigenvalues.len();
    if data.len() != n || cutoff > n {
        return invalid("data length or cutoff does not match the spectrum");
    }
    if let Some(k) = eigenvalues[..cutoff].iter().position(|&l| l == 0.0) {
        return Err(Error::DegenerateMode { k: k + 1 });
    }
    let mut coefficients = vec![0.0; n];
    let mut data_projection = vec![0.0; n];
    for k in 0..cutoff {
        coefficients[k] = data[k] / eigenvalues[k];
        data_projection[k] = data[k];
    }
    Ok(Reconstruction {
        rule,
        cutoff,
        coefficients,
        data_projection,
    })
}
