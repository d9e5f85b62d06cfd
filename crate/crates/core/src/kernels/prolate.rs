//! Eigenvalues `χ_k` of the prolate differential operator
//! `−[(1 − x²) ψ']' + c² x² ψ` on `[−1, 1]`.
//!
//! In the orthonormal Legendre basis `P̄_n = √((2n+1)/2) P_n` the first term is
//! diagonal with entries `n(n+1)` and multiplication by `x` is the Jacobi
//! matrix with off-diagonal `a_n = (n+1)/√((2n+1)(2n+3))`. Hence `x²` couples
//! `n` only to `n` and `n ± 2`, and each parity block is tridiagonal.

use crate::error::{invalid, Error, Result};
use crate::spectral::{eigh, legendre, SymmetricOperatorMatrix};

/// Allowed shift of the last eigenvalue when the basis grows by ten.
pub const RESOLUTION_TOL: f64 = 1e-8;
const AUTO_MAX_DOUBLINGS: usize = 6;

/// Prolate eigenvalues together with their Legendre expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlateSpectrum {
    pub c: f64,
    /// `χ_0 < χ_1 < …`
    pub chi: Vec<f64>,
    pub basis_order: usize,
    /// `coefficients[k][n]` multiplies `P̄_n` in the `k`-th eigenfunction.
    pub coefficients: Vec<Vec<f64>>,
}

impl ProlateSpectrum {
    /// Evaluates the `k`-th eigenfunction (unit `L²(−1, 1)` norm) at `x`.
    pub fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        self.coefficients[k]
            .iter()
            .enumerate()
            .map(|(n, &d)| d * ((2.0 * n as f64 + 1.0) / 2.0).sqrt() * legendre(n, x).0)
            .sum()
    }
}

fn jacobi_offdiag(n: usize) -> f64 {
    let nf = n as f64;
    (nf + 1.0) / ((2.0 * nf + 1.0) * (2.0 * nf + 3.0)).sqrt()
}

/// The Galerkin matrix of the prolate operator on `P̄_0, …, P̄_{order−1}`.
pub(crate) fn prolate_matrix(c: f64, order: usize) -> Result<SymmetricOperatorMatrix> {
    let c2 = c * c;
    SymmetricOperatorMatrix::from_fn(order, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        if lo == hi {
            let n = lo as f64;
            let below = if lo == 0 { 0.0 } else { jacobi_offdiag(lo - 1) };
            let x2 = jacobi_offdiag(lo).powi(2) + below * below;
            n * (n + 1.0) + c2 * x2
        } else if hi == lo + 2 {
            c2 * jacobi_offdiag(lo) * jacobi_offdiag(lo + 1)
        } else {
            0.0
        }
    })
}

fn smallest_modes(c: f64, count: usize, order: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = prolate_matrix(c, order)?;
    let eig = eigh(&m)?;
    let mut pairs: Vec<(f64, Vec<f64>)> = eig.values.into_iter().zip(eig.vectors).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.truncate(count);
    Ok(pairs.into_iter().unzip())
}

/// The `count` smallest prolate eigenvalues from a basis of `basis_order`
/// normalized Legendre polynomials.
///
/// Fails with [`Error::ResolutionFailure`] if `χ_{count−1}` moves by more than
/// `1e-8` when ten more basis functions are added.
pub fn prolate_chi(c: f64, count: usize, basis_order: usize) -> Result<ProlateSpectrum> {
    if !(c > 0.0 && c.is_finite()) {
        return invalid(format!("prolate bandwidth must be positive, got {c}"));
    }
    if count == 0 {
        return invalid("count must be positive");
    }
    if basis_order < count + 10 {
        return invalid(format!(
            "basis_order must be at least count + 10 = {}, got {basis_order}",
            count + 10
        ));
    }
    let (chi, coefficients) = smallest_modes(c, count, basis_order)?;
    let (chi_wide, _) = smallest_modes(c, count, basis_order + 10)?;
    let last = count - 1;
    let shift = (chi[last] - chi_wide[last]).abs();
    if shift > RESOLUTION_TOL {
        return Err(Error::ResolutionFailure { basis_order, shift });
    }
    if chi.windows(2).any(|w| w[1] <= w[0]) || chi[0] <= 0.0 {
        return Err(Error::NumericFailure(
            "prolate eigenvalues are not strictly increasing and positive".into(),
        ));
    }
    Ok(ProlateSpectrum {
        c,
        chi,
        basis_order,
        coefficients,
    })
}

/// [`prolate_chi`] starting from a basis of `count + 30` and doubling it on
/// resolution failure.
pub fn prolate_chi_auto(c: f64, count: usize) -> Result<ProlateSpectrum> {
    let mut order = count + 30;
    let mut last_err = None;
    for _ in 0..=AUTO_MAX_DOUBLINGS {
        match prolate_chi(c, count, order) {
            Err(e @ Error::ResolutionFailure { .. }) => {
                last_err = Some(e);
                order *= 2;
            }
            other => return other,
        }
    }
    Err(last_err.expect("loop ran at least once"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_limit() {
        let s = prolate_chi(1e-6, 6, 40).unwrap();
        for (k, chi) in s.chi.iter().enumerate() {
            let kf = k as f64;
            assert!((chi - kf * (kf + 1.0)).abs() < 1e-9, "k={k} chi={chi}");
        }
    }

    #[test]
    fn asymptotic_value_at_k10() {
        let s = prolate_chi(1.0, 11, 41).unwrap();
        assert!((s.chi[10] - 110.5).abs() <= 0.05, "chi_10 = {}", s.chi[10]);
        assert!(s.chi[0] > 0.0);
    }

    #[test]
    fn asymptotics_for_small_c() {
        for &c in &[0.5, 1.0, 2.0] {
            let s = prolate_chi_auto(c, 21).unwrap();
            for k in 8..=20 {
                let kf = k as f64;
                let dev = (s.chi[k] - kf * (kf + 1.0) - c * c / 2.0).abs();
                assert!(dev <= 1.0, "c={c} k={k} dev={dev}");
            }
        }
    }

    #[test]
    fn strictly_increasing_and_positive() {
        let s = prolate_chi_auto(10.0, 16).unwrap();
        assert!(s.chi[0] > 0.0);
        assert!(s.chi.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn basis_order_checks() {
        assert!(matches!(prolate_chi(1.0, 10, 15), Err(Error::InvalidArgument(_))));
        // A large bandwidth cannot be resolved by a barely sufficient basis.
        assert!(matches!(
            prolate_chi(40.0, 10, 20),
            Err(Error::ResolutionFailure { .. })
        ));
        assert!(prolate_chi_auto(40.0, 10).is_ok());
    }

    #[test]
    fn eigenfunctions_are_normalized() {
        let s = prolate_chi(2.0, 3, 30).unwrap();
        let g = crate::spectral::gauss_legendre(80, -1.0, 1.0).unwrap();
        for k in 0..3 {
            let norm = g.integrate(|x| s.eigenfunction(k, x).powi(2));
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }
}
