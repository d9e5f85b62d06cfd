//! Gauss–Legendre quadrature on a bounded interval.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Newton tolerance on the Legendre roots.
const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and positive weights of a quadrature rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Builds a grid from explicit nodes and weights after validating them.
    ///
    /// Nodes must be strictly increasing inside `[a, b]`, weights positive
    /// and summing to `b - a` within `1e-12` relative, with at least two
    /// points.
    pub fn new(a: f64, b: f64, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return invalid(format!("interval [{a}, {b}] must satisfy a < b"));
        }
        if nodes.len() != weights.len() {
            return invalid(format!("{} nodes but {} weights", nodes.len(), weights.len()));
        }
        if nodes.len() < 2 {
            return invalid("a quadrature grid needs at least two nodes");
        }
        if nodes.iter().any(|&x| !(a..=b).contains(&x)) {
            return invalid("all nodes must lie in [a, b]");
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("nodes must be strictly increasing");
        }
        if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return invalid("weights must be positive and finite");
        }
        let total: f64 = weights.iter().sum();
        if ((total - (b - a)) / (b - a)).abs() > 1e-12 {
            return invalid(format!("weights sum to {total}, expected {}", b - a));
        }
        Ok(Self { a, b, nodes, weights })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative, by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < f64::EPSILON {
        // P_n'(±1) = (±1)^(n+1) n(n+1)/2
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

/// The `n`-point Gauss–Legendre rule mapped to `[a, b]`.
///
/// Roots of `P_n` are found by Newton iteration from the Chebyshev-like
/// initial guesses `cos(π(i - 1/4)/(n + 1/2))`; only half are computed and the
/// rest obtained by symmetry.
///
/// ```
/// let grid = fredholm::gauss_legendre(2, -1.0, 1.0).unwrap();
/// let r = 1.0 / 3f64.sqrt();
/// assert!((grid.nodes()[0] + r).abs() < 1e-15 && (grid.nodes()[1] - r).abs() < 1e-15);
/// assert!((grid.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-15);
/// ```
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureGrid> {
    if n < 2 {
        return invalid(format!("Gauss-Legendre rule needs n >= 2, got {n}"));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return invalid(format!("interval [{a}, {b}] must satisfy a < b"));
    }
    let nf = n as f64;
    let mut t = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root
        t[n - 1 - i] = x;
        t[i] = -x;
        w[n - 1 - i] = weight;
        w[i] = weight;
    }
    if n % 2 == 1 {
        t[n / 2] = 0.0;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = t.iter().map(|&x| mid + half * x).collect();
    let weights = w.iter().map(|&wi| half * wi).collect();
    QuadratureGrid::new(a, b, nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_point_rule_closed_form() {
        let g = gauss_legendre(2, -1.0, 1.0).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((g.nodes()[0] + r).abs() < 1e-15);
        assert!((g.nodes()[1] - r).abs() < 1e-15);
        assert!((g.weights()[0] - 1.0).abs() < 1e-15);
        assert!((g.weights()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule_integrates_x_squared_on_unit_interval() {
        let g = gauss_legendre(2, 0.0, 1.0).unwrap();
        assert!((g.integrate(|x| x * x) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sine_integral_with_64_points() {
        let g = gauss_legendre(64, 0.0, 1.0).unwrap();
        let exact = 2.0 / PI;
        assert!((g.integrate(|x| (PI * x).sin()) - exact).abs() < 1e-12);
    }

    #[test]
    fn monomial_exactness_up_to_degree_2n_minus_1() {
        for &n in &[2usize, 3, 5, 8, 17, 32] {
            let g = gauss_legendre(n, -0.5, 2.0).unwrap();
            for d in 0..(2 * n) {
                let exact = (2f64.powi(d as i32 + 1) - (-0.5f64).powi(d as i32 + 1)) / (d as f64 + 1.0);
                let q = g.integrate(|x| x.powi(d as i32));
                let rel = ((q - exact) / exact.abs().max(1e-300)).abs();
                assert!(rel <= 1e-12, "n={n} d={d} rel={rel:e}");
            }
        }
    }

    #[test]
    fn odd_order_has_centre_node() {
        let g = gauss_legendre(5, 0.0, 2.0).unwrap();
        assert_eq!(g.nodes()[2], 1.0);
        let sum: f64 = g.weights().iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gauss_legendre(1, 0.0, 1.0).is_err());
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(gauss_legendre(4, 2.0, 1.0).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(QuadratureGrid::new(0.0, 1.0, vec![0.2, 0.1], vec![0.5, 0.5]).is_err());
        assert!(QuadratureGrid::new(0.0, 1.0, vec![0.1, 0.2], vec![0.5, 0.4]).is_err());
        assert!(QuadratureGrid::new(0.0, 1.0, vec![0.1, 1.2], vec![0.5, 0.5]).is_err());
        assert!(QuadratureGrid::new(0.0, 1.0, vec![0.1], vec![1.0]).is_err());
        assert!(QuadratureGrid::new(0.0, 1.0, vec![0.25, 0.75], vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn legendre_values() {
        // P_3(x) = (5x^3 - 3x)/2, P_3'(x) = (15x^2 - 3)/2
        let (p, dp) = legendre(3, 0.4);
        assert!((p - (5.0 * 0.064 - 1.2) / 2.0).abs() < 1e-15);
        assert!((dp - (15.0 * 0.16 - 3.0) / 2.0).abs() < 1e-15);
        assert_eq!(legendre(4, 1.0).0, 1.0);
    }
}
