//! The `fredholm` experiment driver.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 parse or argument error,
//! 3 infeasible specification, 4 I/O error.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{Command, ExperimentConfig, Format, RuleChoice, SpectrumSource};

/// A failure with its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<fredholm::Error> for CliError {
    fn from(e: fredholm::Error) -> Self {
        use fredholm::Error as E;
        let code = match &e {
            E::InvalidArgument(_) | E::Domain(_) | E::Json(_) => 2,
            E::InfeasibleSpec(_) => 3,
            E::Io(_) => 4,
            _ => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fredholm",
    version,
    about = "Truncated eigenfunction regularization experiments"
)]
struct Cli {
    /// JSON experiment configuration; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Nyström eigenvalues, with the closed form where known.
    Spectrum(Opts),
    /// Cutoffs k1 and k2 for each noise level.
    Truncate(Opts),
    /// Reconstruct a stored problem instance.
    Solve(Opts),
    /// Errors, bounds and bit counts along an eps grid.
    Sweep(Opts),
    /// Entropy and capacity lower bounds of the data ellipsoids.
    Entropy(Opts),
    /// Stability bound against the exact finite-dimensional sup.
    Stability(Opts),
    /// Exact covering and packing numbers of a point set.
    Cover(Opts),
    /// Synthesize a problem instance as JSON.
    Simulate(Opts),
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// `triangular`, `sinc:c=10[,a=-1,b=1]` or `tabulated:<file.json>`.
    #[arg(long)]
    kernel: Option<String>,
    /// Quadrature nodes of the Nyström discretization.
    #[arg(long = "n", alias = "n-nodes")]
    n_nodes: Option<usize>,
    /// `identity`, `derivative`, `power:p=..,scale=..`, `prolate:c=..`,
    /// `sinclog:c=..` or `custom:b1,b2,...`.
    #[arg(long = "beta", alias = "constraint")]
    constraint: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    /// Comma-separated noise levels.
    #[arg(long, value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
    /// A-priori bound on the constraint norm.
    #[arg(long = "E")]
    e_bound: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// `power:gamma=..`, `explog` or `custom:r1:p1,r2:p2,...`.
    #[arg(long)]
    p: Option<String>,
    /// True solution: `decay:c=1,q=2` or `explicit:f1,f2,...`.
    #[arg(long)]
    f: Option<String>,
    /// `flat`, `flat:k=<modes>` or `range`.
    #[arg(long)]
    noise: Option<String>,
    /// CSV file with one point per row.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Problem instance JSON for `solve`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    rule: Option<RuleChoice>,
    #[arg(long, value_enum)]
    spectrum: Option<SpectrumSource>,
    /// Number of modes to keep.
    #[arg(long)]
    count: Option<usize>,
}

impl Opts {
    fn into_config(self, command: Command) -> ExperimentConfig {
        ExperimentConfig {
            command: Some(command),
            kernel: self.kernel,
            constraint: self.constraint,
            eps: self.eps,
            eps_grid: self.eps_grid,
            e_bound: self.e_bound,
            n_nodes: self.n_nodes,
            seed: self.seed,
            output: self.output,
            format: self.format,
            p: self.p,
            f: self.f,
            noise: self.noise,
            points: self.points,
            input: self.input,
            rule: self.rule,
            spectrum: self.spectrum,
            count: self.count,
        }
    }
}

fn parse_config<I, T>(args: I) -> Result<Result<ExperimentConfig, String>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => return Ok(Err(e.to_string())),
        Err(e) => return Err(CliError::parse(e.to_string())),
    };
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let top = match cli.command {
        None => ExperimentConfig::default(),
        Some(sub) => {
            let (cmd, opts) = match sub {
                Sub::Spectrum(o) => (Command::Spectrum, o),
                Sub::Truncate(o) => (Command::Truncate, o),
                Sub::Solve(o) => (Command::Solve, o),
                Sub::Sweep(o) => (Command::Sweep, o),
                Sub::Entropy(o) => (Command::Entropy, o),
                Sub::Stability(o) => (Command::Stability, o),
                Sub::Cover(o) => (Command::Cover, o),
                Sub::Simulate(o) => (Command::Simulate, o),
            };
            opts.into_config(cmd)
        }
    };
    let cfg = base.overlay(top);
    if cfg.command.is_none() {
        return Err(CliError::parse(
            "no command given (use a subcommand or set \"command\" in --config)",
        ));
    }
    Ok(Ok(cfg))
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` or to the configured file. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_config(args).and_then(|parsed| match parsed {
        Err(help) => Ok(help),
        Ok(cfg) => {
            let text = commands::execute(&cfg)?;
            match &cfg.output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    });
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                4
            }
        },
        Err(e) => {
            let msg = e.message.trim_end();
            let _ = writeln!(err, "error: {}", msg.strip_prefix("error: ").unwrap_or(msg));
            e.code
        }
    }
}
