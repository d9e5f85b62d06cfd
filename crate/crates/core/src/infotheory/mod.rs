//! Information content of the data ellipsoids: volume lower bounds for the
//! ε-entropy and ε-capacity, and exact covering and packing numbers of small
//! point sets.

mod covering;

pub use covering::{
    covering_number_exact, greedy_separated_net, packing_number_exact, sample_ellipsoid, Cover, FinitePointSet,
    Packing, EXACT_BUDGET,
};

use crate::error::{invalid, Result};
use crate::regularize::{truncation_k1, truncation_k2};

/// An ellipsoid with semi-axes sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    semi_axes: Vec<f64>,
}

impl Ellipsoid {
    pub fn new(mut semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return invalid("semi-axes must be positive and finite");
        }
        semi_axes.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { semi_axes })
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }
}

/// The image of `{‖Bf‖ ≤ E}` under `A`: semi-axes `E·λ_k/β_k`, or `E·λ_k`
/// when `beta` is `None`. Eigenvalues are taken by modulus.
pub fn ellipsoid_of(eigenvalues: &[f64], beta: Option<&[f64]>, e_bound: f64) -> Result<Ellipsoid> {
    if !(e_bound > 0.0) {
        return invalid("E must be positive");
    }
    let axes = match beta {
        None => eigenvalues.iter().map(|l| e_bound * l.abs()).collect(),
        Some(b) => {
            if b.len() < eigenvalues.len() {
                return invalid("fewer beta values than eigenvalues");
            }
            eigenvalues.iter().zip(b).map(|(l, b)| e_bound * l.abs() / b).collect()
        }
    };
    Ellipsoid::new(axes)
}

/// Bit counts at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoReport {
    pub eps: f64,
    pub cutoff: usize,
    /// Lower bound for `H_ε`.
    pub entropy_bits: f64,
    /// Lower bound for `log₂ M_ε`.
    pub capacity_bits: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid(format!("eps must be positive, got {eps}"));
    }
    Ok(())
}

fn bits(axes: &[f64], eps: f64) -> (usize, f64) {
    let cutoff = axes.iter().take_while(|&&a| a >= eps).count();
    let sum = axes[..cutoff].iter().map(|a| (a / eps).log2()).sum();
    (cutoff, sum)
}

/// `Σ_{k ≤ K} log₂(a_k/ε)` over the semi-axes `a_k ≥ ε`.
///
/// ```
/// use fredholm::infotheory::{ellipsoid_of, entropy_lower_bound};
/// let lam = fredholm::kernels::triangular_eigenvalues(50);
/// let r = entropy_lower_bound(&ellipsoid_of(&lam, None, 1.0).unwrap(), 0.01).unwrap();
/// assert_eq!(r.cutoff, 3);
/// assert!((r.entropy_bits - 4.853).abs() < 1e-3);
/// ```
pub fn entropy_lower_bound(ellipsoid: &Ellipsoid, eps: f64) -> Result<InfoReport> {
    check_eps(eps)?;
    let (cutoff, b) = bits(&ellipsoid.semi_axes, eps);
    Ok(InfoReport {
        eps,
        cutoff,
        entropy_bits: b,
        capacity_bits: b,
    })
}

/// The capacity bound, inherited from the entropy bound since `N_ε ≤ M_ε`.
pub fn capacity_lower_bound(ellipsoid: &Ellipsoid, eps: f64) -> Result<InfoReport> {
    entropy_lower_bound(ellipsoid, eps)
}

/// Reports for the two truncation rules on the same spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowComparison {
    pub k1: InfoReport,
    pub k2: InfoReport,
    /// `bits(k₁) − bits(k₂)`.
    pub difference: f64,
}

/// Bits `Σ log₂(E λ_k / ε)` carried by the modes kept by each rule.
pub fn information_flow_comparison(
    eigenvalues: &[f64],
    beta: &[f64],
    eps: f64,
    e_bound: f64,
) -> Result<FlowComparison> {
    check_eps(eps)?;
    let k1 = truncation_k1(eigenvalues, eps, e_bound)?;
    let k2 = truncation_k2(eigenvalues, beta, eps, e_bound)?;
    let report = |cutoff: usize| {
        let b: f64 = eigenvalues[..cutoff]
            .iter()
            .map(|l| (e_bound * l.abs() / eps).log2())
            .sum();
        InfoReport {
            eps,
            cutoff,
            entropy_bits: b,
            capacity_bits: b,
        }
    };
    let (r1, r2) = (report(k1), report(k2));
    Ok(FlowComparison {
        k1: r1,
        k2: r2,
        difference: r1.entropy_bits - r2.entropy_bits,
    })
}

/// `S · log₂(1/ε)`: the entropy of a band-limited signal with Shannon number `S`.
pub fn shannon_entropy_estimate(shannon_number: f64, eps: f64) -> Result<f64> {
    if !(shannon_number > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return invalid("need S > 0 and 0 < eps < 1");
    }
    Ok(shannon_number * (1.0 / eps).log2())
}
