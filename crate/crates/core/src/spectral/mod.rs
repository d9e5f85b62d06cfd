//! Nyström discretization of symmetric integral operators and the resulting
//! spectral system `{λ_k, ψ_k}`.
//!
//! The operator `(Af)(x) = ∫ K(x, y) f(y) dy` is replaced by the matrix
//! `M_ij = √w_i K(x_i, x_j) √w_j` on a quadrature grid. `M` is symmetric, and
//! if `v` is a unit eigenvector of `M` then `ψ(x_i) = v_i / √w_i` is
//! orthonormal in the discrete inner product `Σ_i w_i f(x_i) g(x_i)`.

mod eigen;
mod quadrature;

pub use eigen::{eigh, Eigendecomposition, SymmetricOperatorMatrix, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use quadrature::{gauss_legendre, legendre, QuadratureGrid};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Modes with `|λ_k| ≤ NULL_SPACE_TOL · |λ_1|` are treated as numerical null space.
pub const NULL_SPACE_TOL: f64 = 1e-12;

/// A real symmetric kernel `K(x, y)`.
pub trait Kernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64>;
}

impl<F> Kernel for F
where
    F: Fn(f64, f64) -> f64,
{
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self(x, y))
    }
}

/// The symmetrized Nyström matrix `√w_i K(x_i, x_j) √w_j`.
pub fn nystrom_matrix<K: Kernel + ?Sized>(kernel: &K, grid: &QuadratureGrid) -> Result<SymmetricOperatorMatrix> {
    let n = grid.len();
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let x = grid.nodes();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let k = kernel.eval(x[i], x[j])?;
            if !k.is_finite() {
                return Err(Error::NumericDomain { i, j, value: k });
            }
            entries.push(sqrt_w[i] * k * sqrt_w[j]);
        }
    }
    SymmetricOperatorMatrix::from_row_major(n, entries)
}

/// Eigenvalues and sampled eigenfunctions of a discretized integral operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSystem {
    grid: QuadratureGrid,
    eigenvalues: Vec<f64>,
    eigfun_samples: Vec<Vec<f64>>,
    negative_count: usize,
    discarded: usize,
}

/// Discretizes `kernel` on `grid` and diagonalizes it.
///
/// Modes in the numerical null space are dropped; negative eigenvalues among
/// the retained ones are kept and counted in [`SpectralSystem::negative_count`].
pub fn spectral_system<K: Kernel + ?Sized>(kernel: &K, grid: &QuadratureGrid) -> Result<SpectralSystem> {
    let m = nystrom_matrix(kernel, grid)?;
    let eig = eigh(&m)?;
    SpectralSystem::from_decomposition(grid.clone(), eig)
}

impl SpectralSystem {
    fn from_decomposition(grid: QuadratureGrid, eig: Eigendecomposition) -> Result<Self> {
        let lead = eig.values.first().map_or(0.0, |v| v.abs());
        let cut = NULL_SPACE_TOL * lead;
        let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
        let mut eigenvalues = Vec::new();
        let mut eigfun_samples = Vec::new();
        for (lam, v) in eig.values.into_iter().zip(eig.vectors) {
            if lam.abs() <= cut {
                continue;
            }
            eigenvalues.push(lam);
            eigfun_samples.push(v.iter().zip(&sqrt_w).map(|(vi, sw)| vi / sw).collect());
        }
        let n = grid.len();
        let negative_count = eigenvalues.iter().filter(|&&l| l < 0.0).count();
        Ok(Self {
            discarded: n - eigenvalues.len(),
            grid,
            eigenvalues,
            eigfun_samples,
            negative_count,
        })
    }

    /// Assembles a system from precomputed parts, checking the ordering and
    /// weighted-orthonormality invariants.
    pub fn from_parts(grid: QuadratureGrid, eigenvalues: Vec<f64>, eigfun_samples: Vec<Vec<f64>>) -> Result<Self> {
        if eigenvalues.len() != eigfun_samples.len() {
            return invalid("one eigenfunction is required per eigenvalue");
        }
        if eigfun_samples.iter().any(|s| s.len() != grid.len()) {
            return invalid("eigenfunction sample count must match the grid");
        }
        if eigenvalues.windows(2).any(|w| w[1].abs() > w[0].abs()) {
            return invalid("eigenvalues must be ordered by non-increasing modulus");
        }
        let sys = Self {
            negative_count: eigenvalues.iter().filter(|&&l| l < 0.0).count(),
            discarded: 0,
            grid,
            eigenvalues,
            eigfun_samples,
        };
        let err = sys.orthonormality_error();
        if err > 1e-8 {
            return invalid(format!("eigenfunctions not orthonormal (max deviation {err:e})"));
        }
        Ok(sys)
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `ψ_k(x_i)` for the zero-based mode index `k`.
    pub fn eigenfunction(&self, k: usize) -> &[f64] {
        &self.eigfun_samples[k]
    }

    pub fn eigenfunctions(&self) -> &[Vec<f64>] {
        &self.eigfun_samples
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Retained eigenvalues that came out negative.
    pub fn negative_count(&self) -> usize {
        self.negative_count
    }

    /// Modes dropped as numerical null space.
    pub fn discarded_count(&self) -> usize {
        self.discarded
    }

    /// Largest `|Σ_i w_i ψ_j(x_i) ψ_k(x_i) − δ_jk|` over stored modes.
    pub fn orthonormality_error(&self) -> f64 {
        let w = self.grid.weights();
        let mut worst: f64 = 0.0;
        for (j, pj) in self.eigfun_samples.iter().enumerate() {
            for (k, pk) in self.eigfun_samples.iter().enumerate().skip(j) {
                let ip: f64 = w.iter().zip(pj).zip(pk).map(|((w, a), b)| w * a * b).sum();
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).abs());
            }
        }
        worst
    }

    /// Coefficients `f_k = Σ_i w_i f(x_i) ψ_k(x_i)` for every stored mode.
    pub fn project(&self, f_samples: &[f64]) -> Result<Vec<f64>> {
        if f_samples.len() != self.grid.len() {
            return invalid(format!("expected {} samples, got {}", self.grid.len(), f_samples.len()));
        }
        let w = self.grid.weights();
        Ok(self
            .eigfun_samples
            .iter()
            .map(|psi| w.iter().zip(f_samples).zip(psi).map(|((w, f), p)| w * f * p).sum())
            .collect())
    }

    /// Samples of `Σ_{k ≤ cutoff} c_k ψ_k` at the grid nodes.
    pub fn reconstruct(&self, coefficients: &[f64], cutoff: usize) -> Result<Vec<f64>> {
        if cutoff > self.len() {
            return invalid(format!("cutoff {cutoff} exceeds the {} stored modes", self.len()));
        }
        if coefficients.len() < cutoff {
            return invalid(format!(
                "cutoff {cutoff} exceeds the {} supplied coefficients",
                coefficients.len()
            ));
        }
        let mut out = vec![0.0; self.grid.len()];
        for (c, psi) in coefficients.iter().zip(&self.eigfun_samples).take(cutoff) {
            for (o, p) in out.iter_mut().zip(psi) {
                *o += c * p;
            }
        }
        Ok(out)
    }

    /// JSON with keys `a, b, nodes, weights, eigenvalues, eigenfunctions`,
    /// floats at 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&SpectralSystemJson {
            a: self.grid.a(),
            b: self.grid.b(),
            nodes: self.grid.nodes().to_vec(),
            weights: self.grid.weights().to_vec(),
            eigenvalues: self.eigenvalues.clone(),
            eigenfunctions: self.eigfun_samples.clone(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SpectralSystemJson = serde_json::from_str(s)?;
        let grid = QuadratureGrid::new(raw.a, raw.b, raw.nodes, raw.weights)?;
        Self::from_parts(grid, raw.eigenvalues, raw.eigenfunctions)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectralSystemJson {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<Vec<f64>>,
}
