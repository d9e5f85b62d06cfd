use super::constraint::ConstraintSequence;
use super::problem::{weighted_norm, ProblemInstance};
use super::truncation::{Reconstruction, Rule};
use crate::error::{invalid, Result};
use crate::numeric::require_non_increasing;

/// Absolute slack allowed on each inequality.
pub const LEMMA_SLACK: f64 = 1e-12;

/// One checked inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + LEMMA_SLACK
    }

    /// `rhs − lhs`.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// `lhs / rhs` (0 when both vanish).
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// The three error inequalities for a reconstruction `f̂`:
/// `‖A(f − f̂)‖ ≤ √2 ε`, `‖B(f − f̂)‖ ≤ √2 E` and
/// `‖A(f − f̂)‖² + (ε/E)² ‖B(f − f̂)‖² ≤ 4ε²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaReport {
    pub data: Inequality,
    pub constraint: Inequality,
    pub combined: Inequality,
}

impl LemmaReport {
    pub fn all_hold(&self) -> bool {
        self.data.holds() && self.constraint.holds() && self.combined.holds()
    }
}

fn lemma_report(instance: &ProblemInstance, rec: &Reconstruction, beta: &[f64]) -> Result<LemmaReport> {
    instance.validate()?;
    if rec.coefficients.len() != instance.len() {
        return invalid("reconstruction and instance have different lengths");
    }
    let diff: Vec<f64> = instance
        .f_true
        .iter()
        .zip(&rec.coefficients)
        .map(|(f, g)| f - g)
        .collect();
    let a = weighted_norm(&instance.eigenvalues, &diff);
    let b = weighted_norm(beta, &diff);
    let (eps, e) = (instance.eps, instance.e_bound);
    let r = eps / e;
    Ok(LemmaReport {
        data: Inequality {
            lhs: a,
            rhs: std::f64::consts::SQRT_2 * eps,
        },
        constraint: Inequality {
            lhs: b,
            rhs: std::f64::consts::SQRT_2 * e,
        },
        combined: Inequality {
            lhs: a * a + r * r * b * b,
            rhs: 4.0 * eps * eps,
        },
    })
}

/// Evaluates the inequalities for `f₂` with the instance's constraint `B`.
pub fn verify_lemma6(instance: &ProblemInstance, rec: &Reconstruction) -> Result<LemmaReport> {
    if rec.rule != Rule::K2 {
        return invalid("verify_lemma6 expects a k2 reconstruction");
    }
    lemma_report(instance, rec, &instance.beta)
}

/// Evaluates the inequalities for `f₁` with `B` the identity, so that the
/// bound on `f` reads `‖f‖ ≤ E`.
pub fn verify_lemma7(instance: &ProblemInstance, rec: &Reconstruction) -> Result<LemmaReport> {
    if rec.rule != Rule::K1 {
        return invalid("verify_lemma7 expects a k1 reconstruction");
    }
    let ones = vec![1.0; instance.len()];
    let identity = ProblemInstance {
        beta: ones.clone(),
        ..instance.clone()
    };
    lemma_report(&identity, rec, &ones)
}

/// `γ_k² = λ_k² + (ε/E)² β_k²`, the spectrum of `A*A + (ε/E)² B*B`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSpectrum {
    pub gamma_sq: Vec<f64>,
    /// 1-based index of the smallest `γ_k²`.
    pub k0: usize,
    /// `2ε / min_k γ_k`.
    pub bound: f64,
    /// `2E / β_{k₀}`.
    pub simplified_bound: f64,
    /// `β_k² → ∞`; the bound need not vanish as `ε → 0` otherwise.
    pub hypothesis_holds: bool,
}

/// Computes [`GammaSpectrum`] over `eigenvalues.len()` modes.
pub fn gamma_spectrum(eigenvalues: &[f64], beta: &ConstraintSequence, eps: f64, e_bound: f64) -> Result<GammaSpectrum> {
    if eigenvalues.is_empty() {
        return invalid("empty spectrum");
    }
    if !(eps > 0.0 && e_bound > 0.0) {
        return invalid("need eps > 0 and E > 0");
    }
    require_non_increasing(
        &eigenvalues.iter().map(|l| l.abs()).collect::<Vec<_>>(),
        "eigenvalue moduli",
    )?;
    let b = beta.values(eigenvalues.len())?;
    let r2 = (eps / e_bound).powi(2);
    let gamma_sq: Vec<f64> = eigenvalues.iter().zip(&b).map(|(l, b)| l * l + r2 * b * b).collect();
    let (i0, min) = gamma_sq
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty");
    Ok(GammaSpectrum {
        k0: i0 + 1,
        bound: 2.0 * eps / min.sqrt(),
        simplified_bound: 2.0 * e_bound / b[i0],
        hypothesis_holds: beta.is_unbounded(),
        gamma_sq,
    })
}

/// `|⟨f − f̂, v⟩|` and its Schwarz bound `2ε (Σ v_k² / (λ_k² + (ε/E)²))^(1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakPairing {
    pub pairing: f64,
    pub bound: f64,
}

/// Pairs the error of a `k₁` reconstruction with test coefficients `v`
/// (zero-padded to the instance length).
pub fn weak_pairing(instance: &ProblemInstance, rec: &Reconstruction, v: &[f64]) -> Result<WeakPairing> {
    if v.len() > instance.len() || rec.coefficients.len() != instance.len() {
        return invalid("test coefficients exceed the instance modes");
    }
    let r2 = (instance.eps / instance.e_bound).powi(2);
    let mut pairing = 0.0;
    let mut sum = 0.0;
    for (k, &vk) in v.iter().enumerate() {
        pairing += (instance.f_true[k] - rec.coefficients[k]) * vk;
        let lam = instance.eigenvalues[k];
        let denom = lam * lam + r2;
        if vk != 0.0 {
            sum += vk * vk / denom;
        }
    }
    Ok(WeakPairing {
        pairing: pairing.abs(),
        bound: 2.0 * instance.eps * sum.sqrt(),
    })
}

/// `‖f − f̂‖₂` over the instance modes.
pub fn error_norm(instance: &ProblemInstance, rec: &Reconstruction) -> f64 {
    instance
        .f_true
        .iter()
        .zip(&rec.coefficients)
        .map(|(f, g)| (f - g).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::triangular_eigenvalues;
    use crate::regularize::{synthesize_problem, truncated_solution, FSpec, NoiseMode, ProblemSpec};

    fn instance(f: FSpec, eps: f64, beta: &ConstraintSequence, seed: u64) -> ProblemInstance {
        let lam = triangular_eigenvalues(200);
        let spec = ProblemSpec {
            f,
            eps,
            e_bound: 1.0,
            noise: NoiseMode::default(),
            seed,
            tight: true,
        };
        synthesize_problem(&lam, beta, &spec).unwrap()
    }

    #[test]
    fn noise_free_unit_mode() {
        let inst = instance(FSpec::Explicit(vec![1.0]), 0.0, &ConstraintSequence::Identity, 0);
        let rec = truncated_solution(&inst, Rule::K2).unwrap();
        let rep = verify_lemma6(&inst, &rec).unwrap();
        assert_eq!(rep.data.lhs, 0.0);
        assert!(rep.all_hold());
    }

    #[test]
    fn seeded_instances_satisfy_both_lemmas() {
        for seed in 0..30 {
            let inst = instance(
                FSpec::Decay { c: 1.0, q: 2.0 },
                1e-3,
                &ConstraintSequence::Derivative,
                seed,
            );
            let rep = verify_lemma6(&inst, &truncated_solution(&inst, Rule::K2).unwrap()).unwrap();
            assert!(rep.all_hold(), "{rep:?}");
            let rep = verify_lemma7(&inst, &truncated_solution(&inst, Rule::K1).unwrap()).unwrap();
            assert!(rep.all_hold(), "{rep:?}");
        }
    }

    #[test]
    fn mass_above_cutoff_keeps_constraint_norm() {
        let mut f = vec![0.0; 40];
        f[39] = 1.0;
        let inst = instance(FSpec::Explicit(f), 1e-3, &ConstraintSequence::Derivative, 3);
        let rec = truncated_solution(&inst, Rule::K2).unwrap();
        assert!(rec.cutoff < 40);
        let rep = verify_lemma6(&inst, &rec).unwrap();
        assert!(rep.constraint.lhs >= inst.constraint_norm() - 1e-12);
        assert!(rep.all_hold());
    }

    #[test]
    fn rule_mismatch_is_rejected() {
        let inst = instance(FSpec::Explicit(vec![1.0]), 1e-2, &ConstraintSequence::Identity, 0);
        let rec = truncated_solution(&inst, Rule::K1).unwrap();
        assert!(verify_lemma6(&inst, &rec).is_err());
    }

    #[test]
    fn example_one_minimizer() {
        // λ_k = k^(-1/2), β_k = k^(1/2): γ² = 1/k + (ε/E)² k is minimal near E/ε.
        let n = 5000;
        let lam: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-0.5)).collect();
        let beta = ConstraintSequence::Power { p: 0.5, scale: 1.0 };
        for &(eps, e) in &[(1e-2, 1.0), (2e-2, 3.0), (5e-3, 2.0)] {
            let g = gamma_spectrum(&lam, &beta, eps, e).unwrap();
            let t0: f64 = e / eps;
            assert!(
                g.k0 == t0.floor() as usize || g.k0 == t0.ceil() as usize,
                "k0={} t0={t0}",
                g.k0
            );
            assert!(g.bound <= g.simplified_bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn k0_grows_as_eps_shrinks() {
        let lam = triangular_eigenvalues(2000);
        let mut last = 0;
        for i in 1..=6 {
            let g = gamma_spectrum(&lam, &ConstraintSequence::Derivative, 10f64.powi(-i), 1.0).unwrap();
            assert!(g.k0 >= last);
            last = g.k0;
        }
    }

    #[test]
    fn bounded_constraint_bound_does_not_vanish() {
        let lam = triangular_eigenvalues(50);
        // Once ε/E exceeds λ_min, the bound sits near 2E.
        let g = gamma_spectrum(&lam, &ConstraintSequence::Identity, 1e-4, 1.0).unwrap();
        assert!(!g.hypothesis_holds);
        let lmin = lam[49];
        let expect = 2.0 * 1e-4 / (lmin * lmin + 1e-8).sqrt();
        assert!((g.bound - expect).abs() <= 1e-12 * expect);
        assert!(g.bound <= 2.0 && g.bound > 1.5);
    }

    #[test]
    fn pairing_cases() {
        let inst = instance(
            FSpec::Decay { c: 1.0, q: 2.0 },
            1e-3,
            &ConstraintSequence::Derivative,
            7,
        );
        let rec = truncated_solution(&inst, Rule::K1).unwrap();
        let zero = weak_pairing(&inst, &rec, &[0.0; 10]).unwrap();
        assert_eq!((zero.pairing, zero.bound), (0.0, 0.0));
        let v: Vec<f64> = (1..=200).map(|k| 1.0 / k as f64).collect();
        let p = weak_pairing(&inst, &rec, &v).unwrap();
        assert!(p.pairing <= p.bound + 1e-10);

        let clean = instance(FSpec::Decay { c: 1.0, q: 2.0 }, 0.0, &ConstraintSequence::Derivative, 7);
        let rec = truncated_solution(&clean, Rule::K1).unwrap();
        let p = weak_pairing(&clean, &rec, &[1.0]).unwrap();
        assert!(p.pairing <= 1e-15);
    }
}
