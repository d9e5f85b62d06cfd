//! Concrete kernels with known spectral structure.
//!
//! * the triangular (Green's function) kernel on `[0, 1]`, whose spectrum is
//!   known in closed form: `λ_k = (kπ)⁻²`, `ψ_k(x) = √2 sin(kπx)`;
//! * the sinc kernel `sin(c(x − y)) / (π(x − y))` of the bandlimiting
//!   operator, whose eigenfunctions are the prolate spheroidal functions;
//! * a tabulated kernel read from a file.

mod prolate;

pub use prolate::{prolate_chi, prolate_chi_auto, ProlateSpectrum};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::require_non_increasing;
use crate::spectral::{gauss_legendre, Kernel, QuadratureGrid};

/// `|x − y|` below which the sinc kernel returns its diagonal limit `c/π`.
pub const SINC_DIAGONAL_TOL: f64 = 1e-12;

/// The triangular kernel `(1 − x) y` for `y ≤ x`, `x (1 − y)` otherwise.
pub fn triangular_kernel(x: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return invalid(format!("triangular kernel needs x, y in [0, 1], got ({x}, {y})"));
    }
    Ok(if y <= x { (1.0 - x) * y } else { x * (1.0 - y) })
}

/// Closed-form eigenpair `k ≥ 1` of the triangular kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularMode {
    pub k: usize,
    pub eigenvalue: f64,
}

impl TriangularMode {
    /// `√2 sin(kπx)`.
    pub fn eigenfunction(&self, x: f64) -> f64 {
        std::f64::consts::SQRT_2 * (self.k as f64 * std::f64::consts::PI * x).sin()
    }
}

/// `λ_k = (kπ)⁻²` with eigenfunction `√2 sin(kπx)`.
pub fn triangular_analytic(k: usize) -> Result<TriangularMode> {
    if k < 1 {
        return invalid("mode index k must be at least 1");
    }
    let kpi = k as f64 * std::f64::consts::PI;
    Ok(TriangularMode {
        k,
        eigenvalue: 1.0 / (kpi * kpi),
    })
}

/// The first `count` analytic eigenvalues of the triangular kernel.
pub fn triangular_eigenvalues(count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| triangular_analytic(k).expect("k >= 1").eigenvalue)
        .collect()
}

/// The sinc kernel `sin(c(x − y)) / (π(x − y))` for a fixed bandwidth `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SincKernel {
    c: f64,
}

impl SincKernel {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return invalid(format!("sinc bandwidth must be positive, got {c}"));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let d = x - y;
        if d.abs() <= SINC_DIAGONAL_TOL {
            self.c / std::f64::consts::PI
        } else {
            (self.c * d).sin() / (std::f64::consts::PI * d)
        }
    }
}

impl Kernel for SincKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.value(x, y))
    }
}

/// Kernel samples on a fixed quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    grid: QuadratureGrid,
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct TabulatedFile {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TabulatedKernel {
    /// `values[i][j] = K(x_i, x_j)`; must be symmetric within `1e-12`.
    pub fn new(grid: QuadratureGrid, values: Vec<Vec<f64>>) -> Result<Self> {
        let n = grid.len();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return invalid(format!("tabulated kernel must be {n} x {n}"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (values[i][j] - values[j][i]).abs() > 1e-12 {
                    return invalid(format!("tabulated kernel not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(Self { grid, values })
    }

    /// Reads `{"a","b","nodes","weights","values"}` from a JSON file.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let raw: TabulatedFile = serde_json::from_str(&text)?;
        let grid = QuadratureGrid::new(raw.a, raw.b, raw.nodes, raw.weights)?;
        Self::new(grid, raw.values)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(&TabulatedFile {
            a: self.grid.a(),
            b: self.grid.b(),
            nodes: self.grid.nodes().to_vec(),
            weights: self.grid.weights().to_vec(),
            values: self.values.clone(),
        })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    fn index_of(&self, x: f64) -> Option<usize> {
        self.grid.nodes().binary_search_by(|node| node.total_cmp(&x)).ok()
    }
}

impl Kernel for TabulatedKernel {
    /// Only defined at the tabulation nodes.
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match (self.index_of(x), self.index_of(y)) {
            (Some(i), Some(j)) => Ok(self.values[i][j]),
            _ => Err(Error::Domain(format!(
                "tabulated kernel is only defined at its nodes, got ({x}, {y})"
            ))),
        }
    }
}

/// Kernel selection as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Triangular,
    Sinc { kernel: SincKernel, a: f64, b: f64 },
    Tabulated(TabulatedKernel),
}

impl KernelSpec {
    /// Parses `"triangular"`, `"sinc:c=10"` (optionally `,a=..,b=..`;
    /// default interval `[-1, 1]`) or `"tabulated:path.json"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        match name.trim() {
            "triangular" if args.trim().is_empty() => Ok(Self::Triangular),
            "sinc" => {
                let mut c = None;
                let (mut a, mut b) = (-1.0, 1.0);
                for (key, value) in parse_params(args)? {
                    match key.as_str() {
                        "c" => c = Some(value),
                        "a" => a = value,
                        "b" => b = value,
                        other => return invalid(format!("unknown sinc parameter '{other}'")),
                    }
                }
                let c = c.ok_or_else(|| Error::InvalidArgument("sinc kernel needs c=<bandwidth>".into()))?;
                if !(a < b) {
                    return invalid(format!("sinc interval [{a}, {b}] must satisfy a < b"));
                }
                Ok(Self::Sinc {
                    kernel: SincKernel::new(c)?,
                    a,
                    b,
                })
            }
            "tabulated" if !args.trim().is_empty() => Ok(Self::Tabulated(TabulatedKernel::from_json_file(Path::new(
                args.trim(),
            ))?)),
            _ => invalid(format!("unrecognized kernel '{spec}'")),
        }
    }

    /// The natural integration interval.
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Self::Triangular => (0.0, 1.0),
            Self::Sinc { a, b, .. } => (*a, *b),
            Self::Tabulated(t) => (t.grid.a(), t.grid.b()),
        }
    }

    /// An `n`-point Gauss–Legendre grid on [`Self::interval`]; tabulated
    /// kernels return their own grid regardless of `n`.
    pub fn grid(&self, n: usize) -> Result<QuadratureGrid> {
        match self {
            Self::Tabulated(t) => Ok(t.grid.clone()),
            _ => {
                let (a, b) = self.interval();
                gauss_legendre(n, a, b)
            }
        }
    }

    /// Closed-form `λ_k` when known (triangular kernel only).
    pub fn analytic_eigenvalue(&self, k: usize) -> Option<f64> {
        match self {
            Self::Triangular => triangular_analytic(k).ok().map(|m| m.eigenvalue),
            _ => None,
        }
    }
}

impl Kernel for KernelSpec {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            Self::Triangular => triangular_kernel(x, y),
            Self::Sinc { kernel, .. } => Ok(kernel.value(x, y)),
            Self::Tabulated(t) => t.eval(x, y),
        }
    }
}

/// Parses `key=value,key=value` with numeric values.
pub(crate) fn parse_params(args: &str) -> Result<Vec<(String, f64)>> {
    args.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("'{v}' is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// The Shannon number `S = ΩX/π`.
pub fn shannon_number(omega: f64, width: f64) -> Result<f64> {
    if !(omega > 0.0 && width > 0.0) {
        return invalid("bandwidth and interval length must be positive");
    }
    Ok(omega * width / std::f64::consts::PI)
}

/// Number of eigenvalues at or above `threshold`.
pub fn plateau_count(eigenvalues: &[f64], threshold: f64) -> Result<usize> {
    require_non_increasing(eigenvalues, "eigenvalues")?;
    Ok(eigenvalues.iter().take_while(|&&l| l >= threshold).count())
}
