//! Command implementations. Each returns the full output text.

use fredholm::infotheory::{
    covering_number_exact, ellipsoid_of, entropy_lower_bound, information_flow_comparison, packing_number_exact,
    shannon_entropy_estimate, FinitePointSet,
};
use fredholm::kernels::{shannon_number, triangular_eigenvalues, KernelSpec};
use fredholm::regularize::{
    error_norm, sub_seed, synthesize_problem, truncated_solution, truncation_k1, truncation_k2, verify_lemma6,
    verify_lemma7, weak_pairing, ConstraintSequence, FSpec, NoiseMode, ProblemInstance, ProblemSpec, Rule,
};
use fredholm::spectral_system;
use fredholm::stability::{
    check_condition, classify_continuity, stability_bound, stability_sup_exact, ContinuityModel, PFunction,
};

use crate::config::{Command, ExperimentConfig, RuleChoice, SpectrumSource};
use crate::table::{Cell, Table};
use crate::CliError;

pub const DEFAULT_KERNEL: &str = "triangular";
pub const DEFAULT_CONSTRAINT: &str = "derivative";
pub const DEFAULT_P: &str = "power:gamma=0.3333333333333333";
pub const DEFAULT_F: &str = "decay:c=1,q=2";
pub const DEFAULT_NODES: usize = 256;
pub const DEFAULT_EPS_GRID: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];

pub fn execute(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let command = cfg.command.ok_or_else(|| CliError::parse("no command given"))?;
    cfg.validate(matches!(command, Command::Simulate))?;
    let format = cfg.format.unwrap_or_default();
    match command {
        Command::Spectrum => spectrum(cfg)?.render(format),
        Command::Truncate => truncate(cfg)?.render(format),
        Command::Solve => solve(cfg)?.render(format),
        Command::Sweep => sweep(cfg)?.render(format),
        Command::Entropy => entropy(cfg)?.render(format),
        Command::Stability => stability(cfg)?.render(format),
        Command::Cover => cover(cfg),
        Command::Simulate => simulate(cfg),
    }
}

fn kernel(cfg: &ExperimentConfig) -> Result<KernelSpec, CliError> {
    Ok(KernelSpec::parse(cfg.kernel.as_deref().unwrap_or(DEFAULT_KERNEL))?)
}

fn constraint(cfg: &ExperimentConfig) -> Result<ConstraintSequence, CliError> {
    Ok(ConstraintSequence::parse(
        cfg.constraint.as_deref().unwrap_or(DEFAULT_CONSTRAINT),
    )?)
}

fn eps_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    match (&cfg.eps_grid, cfg.eps) {
        (Some(g), _) => g.clone(),
        (None, Some(e)) => vec![e],
        (None, None) => DEFAULT_EPS_GRID.to_vec(),
    }
}

/// Eigenvalues of the configured kernel, truncated to `count` if given.
fn eigenvalues(cfg: &ExperimentConfig, spec: &KernelSpec) -> Result<Vec<f64>, CliError> {
    let n = cfg.n_nodes.unwrap_or(DEFAULT_NODES);
    let mut lam = match cfg.spectrum.unwrap_or_default() {
        SpectrumSource::Numeric => spectral_system(spec, &spec.grid(n)?)?.eigenvalues().to_vec(),
        SpectrumSource::Analytic => match spec {
            KernelSpec::Triangular => triangular_eigenvalues(cfg.count.unwrap_or(n)),
            _ => {
                return Err(CliError::parse(
                    "an analytic spectrum is only available for the triangular kernel",
                ))
            }
        },
    };
    if let Some(c) = cfg.count {
        lam.truncate(c);
    }
    Ok(lam)
}

fn split_spec(spec: &str) -> (&str, &str) {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    (name.trim(), args.trim())
}

fn params(args: &str) -> Result<Vec<(String, f64)>, CliError> {
    args.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::parse(format!("expected key=value, got '{kv}'")))?;
            let v = v
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::parse(format!("'{v}' is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn parse_f(spec: &str) -> Result<FSpec, CliError> {
    match split_spec(spec) {
        ("decay", args) => {
            let (mut c, mut q) = (1.0, None);
            for (k, v) in params(args)? {
                match k.as_str() {
                    "c" => c = v,
                    "q" => q = Some(v),
                    other => return Err(CliError::parse(format!("unknown decay parameter '{other}'"))),
                }
            }
            let q = q.ok_or_else(|| CliError::parse("decay needs q=<exponent>"))?;
            Ok(FSpec::Decay { c, q })
        }
        ("explicit", args) => args
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::parse(format!("'{v}' is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FSpec::Explicit),
        _ => Err(CliError::parse(format!("unrecognized f specification '{spec}'"))),
    }
}

pub fn parse_noise(spec: &str) -> Result<NoiseMode, CliError> {
    match split_spec(spec) {
        ("flat", "") => Ok(NoiseMode::Flat { k_noise: None }),
        ("flat", args) => match params(args)?.as_slice() {
            [(k, v)] if k == "k" && *v >= 1.0 && v.fract() == 0.0 => Ok(NoiseMode::Flat {
                k_noise: Some(*v as usize),
            }),
            _ => Err(CliError::parse("flat noise takes k=<positive integer>")),
        },
        ("range" | "range_compatible", "") => Ok(NoiseMode::RangeCompatible),
        _ => Err(CliError::parse(format!("unrecognized noise mode '{spec}'"))),
    }
}

fn problem_spec(cfg: &ExperimentConfig, eps: f64, seed: u64) -> Result<ProblemSpec, CliError> {
    Ok(ProblemSpec {
        f: parse_f(cfg.f.as_deref().unwrap_or(DEFAULT_F))?,
        eps,
        e_bound: cfg.e_bound.unwrap_or(1.0),
        noise: parse_noise(cfg.noise.as_deref().unwrap_or("flat"))?,
        seed,
        tight: true,
    })
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let mut t = Table::new(&["k", "lambda", "lambda_analytic", "rel_err"]);
    for (i, &l) in lam.iter().enumerate() {
        let k = i + 1;
        let row = match spec.analytic_eigenvalue(k) {
            Some(a) => vec![
                Cell::Int(k),
                Cell::Float(l),
                Cell::Float(a),
                Cell::Float((l - a).abs() / a),
            ],
            None => vec![Cell::Int(k), Cell::Float(l), Cell::Empty, Cell::Empty],
        };
        t.push(row);
    }
    Ok(t)
}

fn truncate(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let beta = constraint(cfg)?.values(lam.len())?;
    let e = cfg.e_bound.unwrap_or(1.0);
    let mut t = Table::new(&["eps", "k1", "k2"]);
    for eps in eps_grid(cfg) {
        t.push(vec![
            Cell::Float(eps),
            Cell::Int(truncation_k1(&lam, eps, e)?),
            Cell::Int(truncation_k2(&lam, &beta, eps, e)?),
        ]);
    }
    Ok(t)
}

fn solve(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::parse("solve needs --input <instance.json>"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let inst = ProblemInstance::from_json(&text)?;
    let rule = match cfg.rule.unwrap_or_default() {
        RuleChoice::K1 => Rule::K1,
        RuleChoice::K2 => Rule::K2,
    };
    let rec = truncated_solution(&inst, rule)?;
    let mut t = Table::new(&["k", "lambda_k", "beta_k", "f_k", "gbar_k", "fhat_k"]);
    for k in 0..inst.len() {
        t.push(vec![
            Cell::Int(k + 1),
            Cell::Float(inst.eigenvalues[k]),
            Cell::Float(inst.beta[k]),
            Cell::Float(inst.f_true[k]),
            Cell::Float(inst.g_noisy[k]),
            Cell::Float(rec.coefficients[k]),
        ]);
    }
    t.note(format!("cutoff={}", rec.cutoff));
    Ok(t)
}

fn sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let beta = constraint(cfg)?;
    let p = PFunction::parse(cfg.p.as_deref().unwrap_or(DEFAULT_P))?;
    let seed = cfg.seed.unwrap_or(0);
    let v: Vec<f64> = (1..=lam.len()).map(|k| 1.0 / k as f64).collect();
    let mut t = Table::new(&[
        "eps",
        "k1",
        "k2",
        "err_f1_weak_bound",
        "err_f2",
        "bound_sqrt2_M",
        "lemma6_ok",
        "lemma7_ok",
        "H_bits_k1",
        "H_bits_k2",
    ]);
    for (i, eps) in eps_grid(cfg).into_iter().enumerate() {
        let inst = synthesize_problem(&lam, &beta, &problem_spec(cfg, eps, sub_seed(seed, i as u64))?)?;
        let rec1 = truncated_solution(&inst, Rule::K1)?;
        let rec2 = truncated_solution(&inst, Rule::K2)?;
        let weak = weak_pairing(&inst, &rec1, &v)?;
        let bound = std::f64::consts::SQRT_2 * stability_bound(eps, inst.e_bound, &p)?;
        let flow = information_flow_comparison(&lam, &inst.beta, eps, inst.e_bound)?;
        t.push(vec![
            Cell::Float(eps),
            Cell::Int(rec1.cutoff),
            Cell::Int(rec2.cutoff),
            Cell::Float(weak.bound),
            Cell::Float(error_norm(&inst, &rec2)),
            Cell::Float(bound),
            Cell::Bool(verify_lemma6(&inst, &rec2)?.all_hold()),
            Cell::Bool(verify_lemma7(&inst, &rec1)?.all_hold()),
            Cell::Float(flow.k1.entropy_bits),
            Cell::Float(flow.k2.entropy_bits),
        ]);
    }
    Ok(t)
}

fn entropy(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let e = cfg.e_bound.unwrap_or(1.0);
    let beta = match cfg.constraint.as_deref() {
        Some(c) => Some(ConstraintSequence::parse(c)?.values(lam.len())?),
        None => None,
    };
    let plain = ellipsoid_of(&lam, None, e)?;
    let constrained = beta.as_deref().map(|b| ellipsoid_of(&lam, Some(b), e)).transpose()?;
    let shannon = match &spec {
        KernelSpec::Sinc { kernel, a, b } => Some(shannon_number(kernel.c(), b - a)?),
        _ => None,
    };
    let mut t = Table::new(&[
        "eps",
        "cutoff",
        "entropy_bits",
        "capacity_bits",
        "constrained_bits",
        "shannon_bits",
    ]);
    for eps in eps_grid(cfg) {
        let r = entropy_lower_bound(&plain, eps)?;
        let c = match &constrained {
            Some(ell) => Cell::Float(entropy_lower_bound(ell, eps)?.entropy_bits),
            None => Cell::Empty,
        };
        let s = match shannon {
            Some(s) if eps < 1.0 => Cell::Float(shannon_entropy_estimate(s, eps)?),
            _ => Cell::Empty,
        };
        t.push(vec![
            Cell::Float(eps),
            Cell::Int(r.cutoff),
            Cell::Float(r.entropy_bits),
            Cell::Float(r.capacity_bits),
            c,
            s,
        ]);
    }
    if let Some(s) = shannon {
        t.note(format!("shannon_number={}", fredholm::numeric::format_sig(s, 9)));
    }
    Ok(t)
}

fn stability(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let beta = constraint(cfg)?.values(lam.len())?;
    let p = PFunction::parse(cfg.p.as_deref().unwrap_or(DEFAULT_P))?;
    let e = cfg.e_bound.unwrap_or(1.0);
    let k = lam.len();
    let condition = check_condition(&lam, &beta, &p, k)?;
    let grid = eps_grid(cfg);
    let mut t = Table::new(&["eps", "bound", "exact_sup", "condition_ok"]);
    let mut sups = Vec::with_capacity(grid.len());
    for &eps in &grid {
        let sup = stability_sup_exact(&lam, &beta, eps, e, k)?;
        sups.push(sup);
        t.push(vec![
            Cell::Float(eps),
            Cell::Float(stability_bound(eps, e, &p)?),
            Cell::Float(sup),
            Cell::Bool(condition.ok),
        ]);
    }
    let line = match classify_continuity(&grid, &sups) {
        Ok(c) => {
            let (name, exponent) = match c.model {
                ContinuityModel::Holder { exponent } => ("holder", exponent),
                ContinuityModel::Logarithmic { exponent } => ("logarithmic", exponent),
            };
            format!(
                "classification={name} exponent={} residual={}",
                fredholm::numeric::format_sig(exponent, 9),
                fredholm::numeric::format_sig(c.residual, 3)
            )
        }
        Err(e) => format!("classification=unavailable ({e})"),
    };
    t.note(line);
    Ok(t)
}

fn cover(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let path = cfg
        .points
        .as_ref()
        .ok_or_else(|| CliError::parse("cover needs --points <file.csv>"))?;
    let eps = cfg.eps.ok_or_else(|| CliError::parse("cover needs --eps"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let ps = FinitePointSet::from_csv(&text)?;
    let n = covering_number_exact(&ps, eps)?.size;
    let m = packing_number_exact(&ps, eps)?.size;
    Ok(match cfg.format.unwrap_or_default() {
        crate::config::Format::Csv => format!("N={n}, M={m}, holds={}\n", n <= m),
        crate::config::Format::Json => format!("{{\"N\":{n},\"M\":{m},\"holds\":{}}}\n", n <= m),
    })
}

fn simulate(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let spec = kernel(cfg)?;
    let lam = eigenvalues(cfg, &spec)?;
    let beta = constraint(cfg)?;
    let eps = cfg.eps.unwrap_or(1e-3);
    let inst = synthesize_problem(&lam, &beta, &problem_spec(cfg, eps, cfg.seed.unwrap_or(0))?)?;
    let mut s = inst.to_json()?;
    s.push('\n');
    Ok(s)
}
