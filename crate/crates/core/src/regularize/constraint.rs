use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernels::{parse_params, prolate_chi_auto};

/// The eigenvalues `β_k` (`β_k²` of `B*B`) of a constraint operator diagonal
/// in the eigenbasis of `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSequence {
    /// `β_k = 1`.
    Identity,
    /// `β_k = scale · k^p`.
    Power { p: f64, scale: f64 },
    /// `β_k = kπ`: the first derivative for the triangular kernel.
    Derivative,
    /// `β_k² = χ_{k−1}(c)`: the prolate differential operator.
    Prolate { c: f64 },
    /// `β_k² = 2k ln(k/(ec))` for `k > ⌈ec⌉`, prolate `χ_{k−1}(c)` below.
    SincLog { c: f64 },
    /// Explicit `β_1, β_2, …`.
    Custom { values: Vec<f64> },
}

impl ConstraintSequence {
    /// Parses `identity`, `derivative`, `power:p=1,scale=2`, `prolate:c=10`,
    /// `sinclog:c=10` or `custom:1,2,3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let seq = match name.trim() {
            "identity" => Self::Identity,
            "derivative" => Self::Derivative,
            "power" => {
                let mut p = None;
                let mut scale = 1.0;
                for (k, v) in parse_params(args)? {
                    match k.as_str() {
                        "p" => p = Some(v),
                        "scale" => scale = v,
                        other => return invalid(format!("unknown power parameter '{other}'")),
                    }
                }
                Self::Power {
                    p: p.ok_or_else(|| Error::InvalidArgument("power needs p=<exponent>".into()))?,
                    scale,
                }
            }
            "prolate" | "sinclog" => {
                let params = parse_params(args)?;
                let c = match params.as_slice() {
                    [(k, c)] if k == "c" => *c,
                    _ => return invalid(format!("{name} needs exactly c=<bandwidth>")),
                };
                if name.trim() == "prolate" {
                    Self::Prolate { c }
                } else {
                    Self::SincLog { c }
                }
            }
            "custom" => {
                let values = args
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidArgument(format!("'{v}' is not a number")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::Custom { values }
            }
            _ => return invalid(format!("unrecognized constraint '{spec}'")),
        };
        seq.validate()?;
        Ok(seq)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Power { p, scale } if !(p.is_finite() && *scale > 0.0) => {
                invalid("power constraint needs a finite exponent and positive scale")
            }
            Self::Prolate { c } | Self::SincLog { c } if !(*c > 0.0) => invalid("bandwidth must be positive"),
            Self::Custom { values } if values.iter().any(|&b| !(b > 0.0 && b.is_finite())) => {
                invalid("constraint values must be positive")
            }
            _ => Ok(()),
        }
    }

    /// `β_k² → ∞`. Custom sequences are finite data and count as bounded.
    pub fn is_unbounded(&self) -> bool {
        match self {
            Self::Identity | Self::Custom { .. } => false,
            Self::Power { p, .. } => *p > 0.0,
            Self::Derivative | Self::Prolate { .. } | Self::SincLog { .. } => true,
        }
    }

    /// Polynomial growth rate `r` with `β_k ~ k^r`, when known. Used to
    /// decide whether `Σ β_k² f_k²` converges for a decay law `f_k ~ k^(−q)`.
    pub fn growth_exponent(&self) -> Option<f64> {
        match self {
            Self::Identity => Some(0.0),
            Self::Power { p, .. } => Some(*p),
            Self::Derivative | Self::Prolate { .. } => Some(1.0),
            // k ln k grows faster than k^(1/2) but slower than any larger power
            Self::SincLog { .. } => Some(0.5),
            Self::Custom { .. } => None,
        }
    }

    /// `β_1, …, β_count`.
    pub fn values(&self, count: usize) -> Result<Vec<f64>> {
        self.validate()?;
        let values = match self {
            Self::Identity => vec![1.0; count],
            Self::Power { p, scale } => (1..=count).map(|k| scale * (k as f64).powf(*p)).collect(),
            Self::Derivative => (1..=count).map(|k| k as f64 * std::f64::consts::PI).collect(),
            Self::Prolate { c } => prolate_betas(*c, count)?,
            Self::SincLog { c } => {
                let ec = std::f64::consts::E * c;
                let start = ec.ceil() as usize;
                let n_prolate = count.min(start);
                let mut v = prolate_betas(*c, n_prolate)?;
                v.extend((n_prolate + 1..=count).map(|k| {
                    let kf = k as f64;
                    (2.0 * kf * (kf / ec).ln()).sqrt()
                }));
                v
            }
            Self::Custom { values } => {
                if values.len() < count {
                    return invalid(format!(
                        "custom constraint has {} values, {count} requested",
                        values.len()
                    ));
                }
                values[..count].to_vec()
            }
        };
        if let Some(k) = values.iter().position(|&b| !(b > 0.0 && b.is_finite())) {
            return Err(Error::NumericFailure(format!(
                "β_{} = {} is not positive",
                k + 1,
                values[k]
            )));
        }
        Ok(values)
    }
}

fn prolate_betas(c: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    Ok(prolate_chi_auto(c, count)?.chi.iter().map(|x| x.sqrt()).collect())
}
