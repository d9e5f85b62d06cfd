//! Stability estimates for the constrained inverse problem.
//!
//! The size of the set `{f : ‖Af‖ ≤ ε, ‖Bf‖ ≤ E}` is bounded by
//! `E·√(p⁻¹(ε²/E²))` whenever `λ_k² ≥ β_k² p(β_k⁻²)` for a function `p` with
//! `p(r)/r` increasing, `p(0⁺) = 0` and `p` convex. [`stability_sup_exact`]
//! computes the exact finite-dimensional value for comparison.

use crate::error::{invalid, Error, Result};
use crate::numeric::bisect;

/// Relative tolerance on the condition `λ_k² ≥ β_k² p(β_k⁻²)`, which holds
/// with equality for some presets.
pub const CONDITION_REL_TOL: f64 = 1e-12;

/// The function `p` of the stability condition.
#[derive(Debug, Clone, PartialEq)]
pub enum PFunction {
    /// `p(r) = r^(1/γ)`, `0 < γ < 1`: Hölder continuity with exponent `γ`.
    Power { gamma: f64 },
    /// `p(r) = 4r·e^(−2/r)`: logarithmic continuity.
    ExpLog,
    /// Piecewise-linear through strictly increasing points `(r_i, p_i)`.
    Custom { r: Vec<f64>, p: Vec<f64> },
}

impl PFunction {
    /// Parses `power:gamma=0.333`, `explog`, or `custom:r1:p1,r2:p2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let p = match name.trim() {
            "explog" if args.is_empty() => Self::ExpLog,
            "power" => match crate::kernels::parse_params(args)?.as_slice() {
                [(k, g)] if k == "gamma" => Self::Power { gamma: *g },
                _ => return invalid("power needs exactly gamma=<value>"),
            },
            "custom" => {
                let mut r = Vec::new();
                let mut p = Vec::new();
                for pair in args.split(',') {
                    let (a, b) = pair
                        .split_once(':')
                        .ok_or_else(|| Error::InvalidArgument(format!("'{pair}' is not r:p")))?;
                    let parse = |s: &str| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("'{s}' is not a number")))
                    };
                    r.push(parse(a)?);
                    p.push(parse(b)?);
                }
                Self::Custom { r, p }
            }
            _ => return invalid(format!("unrecognized p function '{spec}'")),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Power { gamma } if !(*gamma > 0.0 && *gamma < 1.0) => {
                invalid(format!("gamma must lie in (0, 1), got {gamma}"))
            }
            Self::Custom { r, p } => {
                let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
                if r.len() < 2 || r.len() != p.len() || !increasing(r) || !increasing(p) || r[0] < 0.0 || p[0] < 0.0 {
                    invalid("custom p needs at least two strictly increasing non-negative points")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `p(r)` for `r > 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("p is defined for r > 0, got {r}")));
        }
        self.validate()?;
        Ok(match self {
            Self::Power { gamma } => r.powf(1.0 / gamma),
            Self::ExpLog => 4.0 * r * (-2.0 / r).exp(),
            Self::Custom { r: rs, p: ps } => interpolate(rs, ps, r)?,
        })
    }

    /// `p⁻¹(s)` for `s > 0` in the range of `p`.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("p⁻¹ is defined for s > 0, got {s}")));
        }
        self.validate()?;
        match self {
            Self::Power { gamma } => Ok(s.powf(*gamma)),
            Self::ExpLog => {
                // p(1e-3) underflows to zero, so the bracket starts there.
                let f = |r: f64| 4.0 * r * (-2.0 / r).exp() - s;
                let mut hi = 1.0;
                while f(hi) < 0.0 {
                    hi *= 2.0;
                }
                bisect(f, 1e-3, hi, 1e-15)
            }
            Self::Custom { r, p } => interpolate(p, r, s),
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    let last = xs.len() - 1;
    if x < xs[0] || x > xs[last] {
        return Err(Error::Domain(format!(
            "{x} outside the tabulated range [{}, {}]",
            xs[0], xs[last]
        )));
    }
    let i = xs.partition_point(|&v| v <= x).clamp(1, last);
    let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    Ok(ys[i - 1] + t * (ys[i] - ys[i - 1]))
}

/// Checks of the three requirements on `p` over a grid of `r` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PProperties {
    /// `p(r)/r` increasing.
    pub ratio_increasing: bool,
    /// `p(r) → 0` as `r → 0⁺`.
    pub vanishes_at_zero: bool,
    /// Second differences `≥ −1e-12`.
    pub convex: bool,
}

/// Evaluates [`PProperties`] on the increasing `grid` (at least three points).
pub fn check_p_properties(p: &PFunction, grid: &[f64]) -> Result<PProperties> {
    if grid.len() < 3 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("need at least three strictly increasing grid points");
    }
    let values = grid.iter().map(|&r| p.eval(r)).collect::<Result<Vec<_>>>()?;
    let ratio_increasing = grid
        .windows(2)
        .zip(values.windows(2))
        .all(|(r, v)| v[1] / r[1] >= v[0] / r[0]);
    let convex = (1..grid.len() - 1).all(|i| {
        let (h0, h1) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
        let slope0 = (values[i] - values[i - 1]) / h0;
        let slope1 = (values[i + 1] - values[i]) / h1;
        slope1 - slope0 >= -1e-12
    });
    let vanishes_at_zero = match p {
        PFunction::Custom { r, p: ps } => r[0] == 0.0 && ps[0] == 0.0,
        _ => {
            let near = p.eval(1e-12)?;
            let reference = p.eval(1e-6)?;
            near <= 1e-11 * reference / 1e-6
        }
    };
    Ok(PProperties {
        ratio_increasing,
        vanishes_at_zero,
        convex,
    })
}

/// Outcome of [`check_condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionReport {
    pub ok: bool,
    /// 1-based.
    pub first_violating_k: Option<usize>,
}

/// Scans `k ≤ count` for `λ_k² ≥ β_k² p(β_k⁻²)`.
pub fn check_condition(eigenvalues: &[f64], beta: &[f64], p: &PFunction, count: usize) -> Result<ConditionReport> {
    if count > eigenvalues.len() || count > beta.len() {
        return invalid(format!("K = {count} exceeds the available modes"));
    }
    for k in 0..count {
        let b2 = beta[k] * beta[k];
        if !(b2 > 0.0) {
            return invalid("beta must be positive");
        }
        let rhs = b2 * p.eval(1.0 / b2)?;
        let lhs = eigenvalues[k] * eigenvalues[k];
        if lhs < rhs * (1.0 - CONDITION_REL_TOL) {
            return Ok(ConditionReport {
                ok: false,
                first_violating_k: Some(k + 1),
            });
        }
    }
    Ok(ConditionReport {
        ok: true,
        first_violating_k: None,
    })
}

/// `E·√(p⁻¹(ε²/E²))`.
///
/// ```
/// use fredholm::stability::{stability_bound, PFunction};
/// let b = stability_bound(1e-3, 1.0, &PFunction::Power { gamma: 1.0 / 3.0 }).unwrap();
/// assert!((b - 0.1).abs() < 1e-12);
/// ```
pub fn stability_bound(eps: f64, e_bound: f64, p: &PFunction) -> Result<f64> {
    if !(eps > 0.0 && e_bound > 0.0) {
        return invalid("need eps > 0 and E > 0");
    }
    Ok(e_bound * p.inverse((eps / e_bound).powi(2))?.sqrt())
}

/// `max ‖f‖` subject to `‖Af‖ ≤ ε` and `‖Bf‖ ≤ E` over the first `count`
/// modes.
///
/// With `u_k = f_k²` this is a linear program with two constraints, so an
/// optimal vertex has at most two non-zero entries. All single indices and
/// pairs are enumerated.
pub fn stability_sup_exact(eigenvalues: &[f64], beta: &[f64], eps: f64, e_bound: f64, count: usize) -> Result<f64> {
    if count > eigenvalues.len() || count > beta.len() {
        return invalid(format!("K = {count} exceeds the available modes"));
    }
    if !(eps >= 0.0 && e_bound > 0.0) {
        return invalid("need eps >= 0 and E > 0");
    }
    let a: Vec<f64> = eigenvalues[..count].iter().map(|l| l * l).collect();
    let b: Vec<f64> = beta[..count].iter().map(|x| x * x).collect();
    let (e2, big_e2) = (eps * eps, e_bound * e_bound);
    let mut best = 0.0f64;
    for i in 0..count {
        let cap_a = if a[i] > 0.0 { e2 / a[i] } else { f64::INFINITY };
        best = best.max(cap_a.min(big_e2 / b[i]));
    }
    for i in 0..count {
        for j in i + 1..count {
            let det = a[i] * b[j] - a[j] * b[i];
            if det == 0.0 {
                continue;
            }
            let ui = (e2 * b[j] - a[j] * big_e2) / det;
            let uj = (a[i] * big_e2 - e2 * b[i]) / det;
            if ui >= 0.0 && uj >= 0.0 {
                best = best.max(ui + uj);
            }
        }
    }
    Ok(best.sqrt())
}

/// Fitted decay law of `𝔐(ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuityModel {
    /// `𝔐 ∝ ε^exponent`.
    Holder { exponent: f64 },
    /// `𝔐 ∝ |ln(ε/2)|^exponent`.
    Logarithmic { exponent: f64 },
}

/// Result of [`classify_continuity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub model: ContinuityModel,
    /// Residual sum of squares of the chosen fit.
    pub residual: f64,
    pub holder_residual: f64,
    pub log_residual: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let rss = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (slope, rss)
}

/// Least-squares fits of `log 𝔐` against `log ε` and against `log|ln(ε/2)|`;
/// the one with the smaller residual wins (Hölder on ties).
pub fn classify_continuity(eps_grid: &[f64], sup_values: &[f64]) -> Result<Classification> {
    if eps_grid.len() < 5 || eps_grid.len() != sup_values.len() {
        return invalid("need at least five (eps, sup) pairs");
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) || eps_grid.iter().any(|&e| !(e > 0.0 && e < 2.0)) {
        return invalid("eps grid must be strictly decreasing within (0, 2)");
    }
    if sup_values.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return invalid("sup values must be positive");
    }
    let spread = sup_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - sup_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread <= 1e-14 * sup_values[0].abs() {
        return Err(Error::Unclassifiable("sup values are constant".into()));
    }
    let y: Vec<f64> = sup_values.iter().map(|s| s.ln()).collect();
    let x_holder: Vec<f64> = eps_grid.iter().map(|e| e.ln()).collect();
    let x_log: Vec<f64> = eps_grid.iter().map(|e| (e / 2.0).ln().abs().ln()).collect();
    let (h_slope, h_rss) = fit_line(&x_holder, &y);
    let (l_slope, l_rss) = fit_line(&x_log, &y);
    let (model, residual) = if h_rss <= l_rss {
        (ContinuityModel::Holder { exponent: h_slope }, h_rss)
    } else {
        (ContinuityModel::Logarithmic { exponent: l_slope }, l_rss)
    };
    Ok(Classification {
        model,
        residual,
        holder_residual: h_rss,
        log_residual: l_rss,
    })
}
