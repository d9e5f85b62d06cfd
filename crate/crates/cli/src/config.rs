//! Experiment configuration shared by the command line and `--config` files.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Truncate,
    Solve,
    Sweep,
    Entropy,
    Stability,
    Cover,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Where the eigenvalues come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumSource {
    /// Nyström discretization with `n_nodes` Gauss–Legendre points.
    #[default]
    Numeric,
    /// Closed-form eigenvalues (triangular kernel only).
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RuleChoice {
    K1,
    #[default]
    K2,
}

/// Every setting an experiment can use. Absent fields take defaults when
/// the command runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub kernel: Option<String>,
    pub constraint: Option<String>,
    pub eps: Option<f64>,
    pub eps_grid: Option<Vec<f64>>,
    #[serde(rename = "E")]
    pub e_bound: Option<f64>,
    pub n_nodes: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// `p` function for stability bounds, e.g. `power:gamma=0.3333333333333333`.
    pub p: Option<String>,
    /// True solution, `decay:c=1,q=2` or `explicit:1,0,0.5`.
    pub f: Option<String>,
    /// `flat`, `flat:k=50` or `range`.
    pub noise: Option<String>,
    pub points: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub rule: Option<RuleChoice>,
    pub spectrum: Option<SpectrumSource>,
    /// Number of modes to keep or print.
    pub count: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid config: {e}")))
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: Self) -> Self {
        overlay!(
            self, top, command, kernel, constraint, eps, eps_grid, e_bound, n_nodes, seed, output, format, p, f, noise,
            points, input, rule, spectrum, count
        );
        self
    }

    /// Rejects non-positive noise levels and bounds, and grids with fewer
    /// than two nodes. `allow_zero_eps` admits the noise-free case.
    pub fn validate(&self, allow_zero_eps: bool) -> Result<(), CliError> {
        let eps_ok = |e: f64| e.is_finite() && (e > 0.0 || (allow_zero_eps && e == 0.0));
        if let Some(e) = self.eps {
            if !eps_ok(e) {
                return Err(CliError::parse(format!("eps must be positive, got {e}")));
            }
        }
        if let Some(grid) = &self.eps_grid {
            if grid.is_empty() || grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                return Err(CliError::parse("eps grid values must be positive"));
            }
        }
        if let Some(e) = self.e_bound {
            if !(e > 0.0 && e.is_finite()) {
                return Err(CliError::parse(format!("E must be positive, got {e}")));
            }
        }
        if let Some(n) = self.n_nodes {
            if n < 2 {
                return Err(CliError::parse(format!("n_nodes must be at least 2, got {n}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_fields_and_overlay() {
        let base =
            ExperimentConfig::from_json(r#"{"command":"sweep","kernel":"triangular","E":2.0,"n_nodes":64}"#).unwrap();
        assert_eq!(base.command, Some(Command::Sweep));
        assert_eq!(base.e_bound, Some(2.0));
        let top = ExperimentConfig {
            n_nodes: Some(128),
            ..Default::default()
        };
        let merged = base.overlay(top);
        assert_eq!(merged.n_nodes, Some(128));
        assert_eq!(merged.kernel.as_deref(), Some("triangular"));
    }

    #[test]
    fn unknown_command_and_fields_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"command":"plot"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"colour":"red"}"#).is_err());
    }

    #[test]
    fn validation() {
        let cfg = ExperimentConfig {
            eps: Some(0.0),
            ..Default::default()
        };
        assert!(cfg.validate(false).is_err());
        assert!(cfg.validate(true).is_ok());
        let cfg = ExperimentConfig {
            n_nodes: Some(1),
            ..Default::default()
        };
        assert!(cfg.validate(false).is_err());
    }
}
