use serde::{Deserialize, Serialize};

use super::constraint::ConstraintSequence;
use super::noise::{make_noise, NoiseMode};
use super::truncation::truncation_k2;
use crate::error::{invalid, Error, Result};
use crate::numeric::{bisect, norm2};

/// The true solution `f` in eigen-coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum FSpec {
    /// `f_1, f_2, …`; missing trailing coefficients are zero.
    Explicit(Vec<f64>),
    /// `f_k = c·k^(−q)`.
    Decay { c: f64, q: f64 },
}

/// Everything except the spectrum needed to synthesize an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub f: FSpec,
    pub eps: f64,
    pub e_bound: f64,
    pub noise: NoiseMode,
    pub seed: u64,
    /// Rescale `f` so that `Σ β_k² f_k² = E²` exactly; otherwise only shrink
    /// it when the bound is exceeded.
    pub tight: bool,
}

/// Diagnostics attached to a synthesized instance.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Fraction of `‖f‖²` carried by modes `k ≤ k₂`.
    pub skewness: f64,
    /// `Σ ḡ_k / λ_k` over the instance modes.
    pub picard_sum: f64,
    /// `Σ (ḡ_k / λ_k)²` over the instance modes.
    pub picard_sum_squares: f64,
}

/// A discretized problem `ḡ = Af + n` in the eigenbasis of `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub eigenvalues: Vec<f64>,
    /// `β_k` values, one per eigenvalue.
    pub beta: Vec<f64>,
    /// The sequence `beta` was generated from, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintSequence>,
    pub f_true: Vec<f64>,
    #[serde(default)]
    pub g_clean: Vec<f64>,
    #[serde(default)]
    pub noise: Vec<f64>,
    pub g_noisy: Vec<f64>,
    pub eps: f64,
    #[serde(rename = "E")]
    pub e_bound: f64,
    pub seed: u64,
    pub noise_mode: NoiseMode,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

impl ProblemInstance {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `‖Bf‖ = (Σ β_k² f_k²)^(1/2)`.
    pub fn constraint_norm(&self) -> f64 {
        weighted_norm(&self.beta, &self.f_true)
    }

    /// Checks lengths, `‖n‖ ≤ ε` and `‖Bf‖ ≤ E` (relative slack `1e-12`).
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.beta.len() != n || self.f_true.len() != n || self.g_noisy.len() != n {
            return invalid("eigenvalues, beta, f_true and g_noisy must have equal lengths");
        }
        if !(self.eps >= 0.0 && self.eps.is_finite() && self.e_bound > 0.0 && self.e_bound.is_finite()) {
            return invalid("need eps >= 0 and E > 0");
        }
        if self.beta.iter().any(|&b| !(b > 0.0)) {
            return invalid("beta must be positive");
        }
        let noise = self.noise_vector();
        if norm2(&noise) > self.eps * (1.0 + 1e-12) {
            return invalid(format!("noise norm {:e} exceeds eps {:e}", norm2(&noise), self.eps));
        }
        if self.constraint_norm() > self.e_bound * (1.0 + 1e-12) {
            return invalid(format!(
                "constraint norm {:e} exceeds E {:e}",
                self.constraint_norm(),
                self.e_bound
            ));
        }
        Ok(())
    }

    /// `ḡ − λf`, recomputed when the instance was loaded without `noise`.
    pub fn noise_vector(&self) -> Vec<f64> {
        if self.noise.len() == self.len() {
            return self.noise.clone();
        }
        self.g_noisy
            .iter()
            .zip(&self.eigenvalues)
            .zip(&self.f_true)
            .map(|((g, l), f)| g - l * f)
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    /// Parses an instance, filling in `g_clean` and `noise` when absent.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut inst: Self = serde_json::from_str(text)?;
        if inst.g_clean.len() != inst.len() {
            inst.g_clean = inst.eigenvalues.iter().zip(&inst.f_true).map(|(l, f)| l * f).collect();
        }
        if inst.noise.len() != inst.len() {
            inst.noise = inst.noise_vector();
        }
        inst.validate()?;
        Ok(inst)
    }
}

pub(crate) fn weighted_norm(weights: &[f64], v: &[f64]) -> f64 {
    weights.iter().zip(v).map(|(w, x)| (w * x).powi(2)).sum::<f64>().sqrt()
}

/// Builds an instance from a spectrum, a constraint sequence and [`ProblemSpec`].
///
/// `f` is rescaled to satisfy `‖Bf‖ ≤ E` (with equality when `tight`), and
/// the noise is drawn by [`make_noise`] with `spec.seed`.
pub fn synthesize_problem(
    eigenvalues: &[f64],
    beta: &ConstraintSequence,
    spec: &ProblemSpec,
) -> Result<ProblemInstance> {
    let n = eigenvalues.len();
    if n == 0 {
        return invalid("empty spectrum");
    }
    if !(spec.eps >= 0.0 && spec.eps.is_finite()) || !(spec.e_bound > 0.0 && spec.e_bound.is_finite()) {
        return invalid("need eps >= 0 and E > 0");
    }
    let beta_values = beta.values(n)?;
    let mut f = match &spec.f {
        FSpec::Explicit(values) => {
            if values.len() > n {
                return invalid(format!("{} coefficients given for {n} modes", values.len()));
            }
            let mut f = values.clone();
            f.resize(n, 0.0);
            f
        }
        FSpec::Decay { c, q } => {
            if let Some(r) = beta.growth_exponent() {
                if 2.0 * (q - r) <= 1.0 {
                    return Err(Error::InfeasibleSpec(format!(
                        "f_k ~ k^(-{q}) with beta_k ~ k^{r}: sum of beta_k^2 f_k^2 diverges"
                    )));
                }
            }
            (1..=n).map(|k| c * (k as f64).powf(-q)).collect()
        }
    };
    if f.iter().any(|x| !x.is_finite()) {
        return invalid("f coefficients must be finite");
    }
    let bnorm = weighted_norm(&beta_values, &f);
    if bnorm == 0.0 && spec.tight {
        return Err(Error::InfeasibleSpec("f = 0 cannot meet a tight bound".into()));
    }
    if spec.tight || bnorm > spec.e_bound {
        let s = spec.e_bound / bnorm;
        f.iter_mut().for_each(|x| *x *= s);
    }
    let g_clean: Vec<f64> = eigenvalues.iter().zip(&f).map(|(l, f)| l * f).collect();
    let noise = make_noise(spec.seed, spec.eps, spec.noise, eigenvalues)?;
    let g_noisy: Vec<f64> = g_clean.iter().zip(&noise).map(|(g, n)| g + n).collect();

    let k2 = truncation_k2(eigenvalues, &beta_values, spec.eps, spec.e_bound)?;
    let total: f64 = f.iter().map(|x| x * x).sum();
    let head: f64 = f[..k2].iter().map(|x| x * x).sum();
    let skewness = if total > 0.0 { head / total } else { 1.0 };
    let ratios = g_noisy
        .iter()
        .zip(eigenvalues)
        .filter(|(_, l)| **l != 0.0)
        .map(|(g, l)| g / l);
    let (picard_sum, picard_sum_squares) = ratios.fold((0.0, 0.0), |(s, s2), r| (s + r, s2 + r * r));

    Ok(ProblemInstance {
        eigenvalues: eigenvalues.to_vec(),
        beta: beta_values,
        constraint: Some(beta.clone()),
        f_true: f,
        g_clean,
        noise,
        g_noisy,
        eps: spec.eps,
        e_bound: spec.e_bound,
        seed: spec.seed,
        noise_mode: spec.noise,
        diagnostics: Diagnostics {
            skewness,
            picard_sum,
            picard_sum_squares,
        },
    })
}

/// Outcome of [`feasibility_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// Some `f` has `‖Af − ḡ‖ ≤ ε` and `‖Bf‖ ≤ E`.
    pub permissible: bool,
    /// `min ‖Bf‖` subject to `‖Af − ḡ‖ ≤ ε` (`+∞` if no `f` fits the data).
    pub min_constraint_norm: f64,
    /// Lagrange multiplier `μ` at the minimizer, when the data constraint is active.
    pub multiplier: Option<f64>,
}

/// Decides whether the data are compatible with the prescribed bounds by
/// solving the diagonal problem `f_k(μ) = λ_k ḡ_k / (λ_k² + μ β_k²)` for the
/// multiplier `μ` where `‖Af(μ) − ḡ‖ = ε`.
pub fn feasibility_check(instance: &ProblemInstance) -> Result<Feasibility> {
    instance.validate()?;
    let eps = instance.eps;
    let lam = &instance.eigenvalues;
    let beta = &instance.beta;
    let g = &instance.g_noisy;
    if norm2(g) <= eps {
        return Ok(Feasibility {
            permissible: true,
            min_constraint_norm: 0.0,
            multiplier: None,
        });
    }
    // Residual component k at multiplier μ is μβ²ḡ/(λ² + μβ²).
    let residual = |mu: f64| -> f64 {
        lam.iter()
            .zip(beta)
            .zip(g)
            .map(|((l, b), g)| {
                let mb = mu * b * b;
                let denom = l * l + mb;
                if denom == 0.0 {
                    g * g
                } else {
                    (mb * g / denom).powi(2)
                }
            })
            .sum::<f64>()
            .sqrt()
    };
    let unreachable: f64 = lam
        .iter()
        .zip(g)
        .filter(|(l, _)| **l == 0.0)
        .map(|(_, g)| g * g)
        .sum::<f64>()
        .sqrt();
    if unreachable >= eps {
        return Ok(Feasibility {
            permissible: false,
            min_constraint_norm: f64::INFINITY,
            multiplier: None,
        });
    }
    let phi = |t: f64| residual(t.exp()) - eps;
    let (mut lo, mut hi) = (-1.0, 1.0);
    while phi(lo) >= 0.0 {
        lo *= 2.0;
        if lo < -1400.0 {
            return Err(Error::NumericFailure(
                "could not bracket the multiplier from below".into(),
            ));
        }
    }
    while phi(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1400.0 {
            return Err(Error::NumericFailure(
                "could not bracket the multiplier from above".into(),
            ));
        }
    }
    let t = bisect(phi, lo, hi, 1e-15)?;
    let mu = t.exp();
    let f: Vec<f64> = lam
        .iter()
        .zip(beta)
        .zip(g)
        .map(|((l, b), g)| l * g / (l * l + mu * b * b))
        .collect();
    let min = weighted_norm(beta, &f);
    Ok(Feasibility {
        permissible: min <= instance.e_bound * (1.0 + 1e-12),
        min_constraint_norm: min,
        multiplier: Some(mu),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::triangular_eigenvalues;
    use approx::assert_relative_eq;

    fn spec(f: FSpec, eps: f64, tight: bool) -> ProblemSpec {
        ProblemSpec {
            f,
            eps,
            e_bound: 1.0,
            noise: NoiseMode::default(),
            seed: 1,
            tight,
        }
    }

    #[test]
    fn unit_mode_is_unchanged() {
        let lam = vec![1.0, 0.5, 0.25];
        let inst = synthesize_problem(
            &lam,
            &ConstraintSequence::Identity,
            &spec(FSpec::Explicit(vec![1.0]), 0.0, true),
        )
        .unwrap();
        assert_eq!(inst.f_true, vec![1.0, 0.0, 0.0]);
        assert_eq!(inst.g_noisy, inst.g_clean);
        assert_eq!(inst.diagnostics.skewness, 1.0);
    }

    #[test]
    fn decay_law_is_rescaled_to_tight_bound() {
        let lam = triangular_eigenvalues(200);
        let inst = synthesize_problem(
            &lam,
            &ConstraintSequence::Derivative,
            &spec(FSpec::Decay { c: 1.0, q: 2.0 }, 1e-3, true),
        )
        .unwrap();
        let sum: f64 = inst
            .f_true
            .iter()
            .enumerate()
            .map(|(k, f)| ((k + 1) as f64 * std::f64::consts::PI * f).powi(2))
            .sum();
        assert!((sum - 1.0).abs() < 1e-10);
        inst.validate().unwrap();
    }

    #[test]
    fn divergent_decay_is_infeasible() {
        let lam = triangular_eigenvalues(50);
        let r = synthesize_problem(
            &lam,
            &ConstraintSequence::Derivative,
            &spec(FSpec::Decay { c: 1.0, q: 1.5 }, 1e-3, true),
        );
        assert!(matches!(r, Err(Error::InfeasibleSpec(_))));
    }

    #[test]
    fn json_round_trip() {
        let lam = triangular_eigenvalues(20);
        let inst = synthesize_problem(
            &lam,
            &ConstraintSequence::Derivative,
            &spec(FSpec::Decay { c: 1.0, q: 2.0 }, 1e-2, true),
        )
        .unwrap();
        let back = ProblemInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
        let v: serde_json::Value = serde_json::from_str(&inst.to_json().unwrap()).unwrap();
        for key in [
            "eigenvalues",
            "beta",
            "f_true",
            "g_noisy",
            "eps",
            "E",
            "seed",
            "noise_mode",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    fn single_mode(c: f64, eps: f64, lam: f64, beta: f64) -> ProblemInstance {
        ProblemInstance {
            eigenvalues: vec![lam],
            beta: vec![beta],
            constraint: None,
            f_true: vec![0.0],
            g_clean: vec![0.0],
            noise: vec![0.0],
            g_noisy: vec![c],
            eps,
            e_bound: 10.0,
            seed: 0,
            noise_mode: NoiseMode::default(),
            diagnostics: Diagnostics::default(),
        }
    }

    #[test]
    fn small_data_is_trivially_feasible() {
        let mut inst = single_mode(0.05, 0.1, 0.5, 2.0);
        let r = feasibility_check(&inst).unwrap();
        assert!(r.permissible);
        assert_eq!(r.min_constraint_norm, 0.0);
        inst.g_noisy = vec![0.0];
        assert_eq!(feasibility_check(&inst).unwrap().min_constraint_norm, 0.0);
    }

    #[test]
    fn single_mode_matches_grid_search() {
        let (c, eps, lam, beta) = (1.0, 0.2, 0.5, 3.0);
        let inst = single_mode(c, eps, lam, beta);
        let r = feasibility_check(&inst).unwrap();
        let analytic = beta * (c - eps) / lam;
        assert_relative_eq!(r.min_constraint_norm, analytic, max_relative = 1e-10);
        let grid_min = (0..=200_000)
            .map(|i| -5.0 + 10.0 * i as f64 / 200_000.0)
            .filter(|f1| (lam * f1 - c).abs() <= eps)
            .map(|f1| (beta * f1).abs())
            .fold(f64::INFINITY, f64::min);
        assert!((grid_min - analytic).abs() < 1e-3);
        assert!(
            !feasibility_check(&ProblemInstance { e_bound: 4.0, ..inst })
                .unwrap()
                .permissible
        );
    }

    #[test]
    fn synthesized_instances_are_permissible() {
        let lam = triangular_eigenvalues(100);
        for seed in 0..20 {
            let mut s = spec(FSpec::Decay { c: 1.0, q: 2.0 }, 1e-3, true);
            s.seed = seed;
            let inst = synthesize_problem(&lam, &ConstraintSequence::Derivative, &s).unwrap();
            let r = feasibility_check(&inst).unwrap();
            assert!(r.permissible);
            assert!(r.min_constraint_norm <= inst.constraint_norm() * (1.0 + 1e-9));
        }
    }
}
