//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Convergence target: off-diagonal Frobenius norm relative to `‖M‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Maximum number of full cyclic sweeps.
pub const MAX_SWEEPS: usize = 100;
/// Components smaller than this are skipped when fixing eigenvector signs.
const SIGN_TOL: f64 = 1e-10;

/// A dense symmetric matrix stored row-major.
///
/// Construction averages the input with its transpose, so
/// `entries[i][j] == entries[j][i]` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricOperatorMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricOperatorMatrix {
    /// Symmetrizes a row-major `order × order` array.
    pub fn from_row_major(order: usize, mut entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return invalid("matrix order must be positive");
        }
        if entries.len() != order * order {
            return invalid(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            ));
        }
        for i in 0..order {
            for j in (i + 1)..order {
                let avg = 0.5 * (entries[i * order + j] + entries[j * order + i]);
                entries[i * order + j] = avg;
                entries[j * order + i] = avg;
            }
        }
        Ok(Self { order, entries })
    }

    /// Builds the matrix from a function of the index pair.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(order: usize, mut f: F) -> Result<Self> {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self::from_row_major(order, entries)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Full eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigendecomposition {
    /// Eigenvalues ordered by non-increasing absolute value.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector paired with `values[k]`; its first
    /// component of magnitude above `1e-10` is positive.
    pub vectors: Vec<Vec<f64>>,
    /// Number of cyclic sweeps performed.
    pub sweeps: usize,
}

/// Diagonalizes `m` by cyclic Jacobi rotations.
///
/// Iterates until the off-diagonal Frobenius norm is at most
/// `1e-12 · ‖M‖_F`, for at most 100 sweeps.
pub fn eigh(m: &SymmetricOperatorMatrix) -> Result<Eigendecomposition> {
    let n = m.order();
    let mut a = m.entries().to_vec();
    // rows of `v` are the accumulated eigenvectors
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let norm = m.frobenius_norm();
    let target = OFF_DIAGONAL_TOL * norm;
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, n);

    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_norm: off,
                target,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = 100.0 * apq.abs();
                // Negligible relative to both diagonal entries: drop it.
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        off = off_diagonal_norm(&a, n);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].abs().total_cmp(&a[i * n + i].abs()));

    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut vec = v[i * n..(i + 1) * n].to_vec();
            if let Some(&first) = vec.iter().find(|x| x.abs() > SIGN_TOL) {
                if first < 0.0 {
                    vec.iter_mut().for_each(|x| *x = -*x);
                }
            }
            vec
        })
        .collect();

    Ok(Eigendecomposition {
        values,
        vectors,
        sweeps,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[p * n + k];
        let akq = a[q * n + k];
        let new_p = akp - s * (akq + tau * akp);
        let new_q = akq + s * (akp - tau * akq);
        a[p * n + k] = new_p;
        a[k * n + p] = new_p;
        a[q * n + k] = new_q;
        a[k * n + q] = new_q;
    }

    let (head, tail) = v.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (x, y) = (*vp, *vq);
        *vp = x - s * (y + tau * x);
        *vq = y + s * (x - tau * y);
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}
