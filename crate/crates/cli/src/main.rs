//! Command-line front end for the distance experiments.
//!
//! Subcommands map one-to-one onto the experiment runners; shared flags
//! override values from an optional JSON config file. Exit codes:
//! 0 — all row-level invariants held; 2 — an invariant was violated
//! (details on stderr); 3 — configuration error.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use schatten_gauss::experiment::{
    run, ExperimentConfig, ExperimentKind, ExperimentOutcome, OutputFormat,
};
use schatten_gauss::Error;

const EXIT_VIOLATION: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(
    name = "schatten-gauss",
    about = "Schatten-norm distance sweeps for Gaussian measures on Hilbert-space truncations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Projection-family sweep: vanishing Schatten bounds vs. pinned
    /// convergence diagnostics.
    Counterexample(CommonArgs),
    /// Hessian Schatten-norm growth in the truncation dimension.
    RadialGrowth(CommonArgs),
    /// Upper bounds and convergence diagnostics per n.
    Bounds(CommonArgs),
    /// Certified lower bounds with the envelope check per n.
    RhoLower(CommonArgs),
    /// Interpolation-identity defect on the built-in test pairs.
    InterpCheck(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Schatten exponent p in [1, inf]; accepts a number or "inf".
    #[arg(long)]
    p: Option<String>,

    /// Sweep over n (comma separated, strictly increasing).
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,

    /// Sweep over truncation dimensions (comma separated, increasing).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,

    /// Monte Carlo sample count per estimate (>= 1000).
    #[arg(long)]
    samples: Option<usize>,

    /// Master seed; every row derives its own substreams from it.
    #[arg(long)]
    seed: Option<u64>,

    /// Output format.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Output path; stdout when omitted.
    #[arg(long)]
    output: Option<String>,

    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<String>,

    /// Embed each n into a truncation of dimension n + PAD.
    #[arg(long, value_name = "PAD")]
    dim_pad: Option<usize>,
}

fn parse_exponent(text: &str) -> Result<f64, String> {
    match text.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| format!("p: expected a number or \"inf\": {e}")),
    }
}

fn build_config(kind: ExperimentKind, args: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {path}: {e}")))?;
            let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
                Error::Config(format!(
                    "config {path}: line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ))
            })?;
            if cfg.experiment != kind {
                return Err(Error::Config(format!(
                    "config {path}: experiment {:?} does not match subcommand {}",
                    cfg.experiment.name(),
                    kind.name()
                )));
            }
            cfg
        }
        None => ExperimentConfig::new(kind),
    };

    if let Some(p) = &args.p {
        cfg.p = parse_exponent(p).map_err(Error::Config)?;
    }
    if let Some(ns) = &args.ns {
        cfg.ns = Some(ns.clone());
    }
    if let Some(dims) = &args.dims {
        cfg.dims = Some(dims.clone());
    }
    if let Some(samples) = args.samples {
        cfg.mc_samples = samples;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(format) = &args.format {
        cfg.format = match format.as_str() {
            "json" => OutputFormat::Json,
            _ => OutputFormat::Csv,
        };
    }
    if let Some(output) = &args.output {
        cfg.output = Some(output.clone());
    }
    if let Some(pad) = args.dim_pad {
        cfg.dim_pad = pad;
    }

    // Fill sweep defaults where the experiment needs a list.
    match kind {
        ExperimentKind::Counterexample | ExperimentKind::Bounds => {
            cfg.ns.get_or_insert_with(|| vec![1, 10, 100, 10_000]);
        }
        ExperimentKind::RhoLower => {
            cfg.ns.get_or_insert_with(|| vec![4, 16, 64, 256]);
        }
        ExperimentKind::RadialGrowth => {
            cfg.dims
                .get_or_insert_with(|| (4..=12).map(|k| 1usize << k).collect());
        }
        ExperimentKind::InterpCheck => {
            cfg.dims.get_or_insert_with(|| vec![1, 3]);
        }
    }
    Ok(cfg)
}

fn emit(cfg: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<(), Error> {
    let rendered = outcome.table.render(cfg.format);
    match &cfg.output {
        Some(path) => fs::write(path, rendered)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.as_bytes())?;
        }
    }
    Ok(())
}

/// Exit code contract: 0 when every row invariant held, 2 otherwise.
fn violation_exit_code(violations: &[String]) -> u8 {
    if violations.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    }
}

/// Anything that prevents a run from producing a table — bad flags, bad
/// config file, unwritable output — is a configuration error.
fn error_exit_code(_err: &Error) -> u8 {
    EXIT_CONFIG
}

fn execute(kind: ExperimentKind, args: &CommonArgs) -> Result<ExitCode, Error> {
    let cfg = build_config(kind, args)?;
    cfg.validate()?;

    if kind == ExperimentKind::Counterexample && cfg.p.is_infinite() {
        eprintln!(
            "note: p = inf pairs with q = 1; the trace-norm column stays at 1 along the sweep \
             and the bound does not vanish"
        );
    }

    let outcome = run(&cfg)?;
    emit(&cfg, &outcome)?;

    for violation in &outcome.violations {
        eprintln!("invariant violation: {violation}");
    }
    Ok(ExitCode::from(violation_exit_code(&outcome.violations)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Counterexample(a) => (ExperimentKind::Counterexample, a),
        Command::RadialGrowth(a) => (ExperimentKind::RadialGrowth, a),
        Command::Bounds(a) => (ExperimentKind::Bounds, a),
        Command::RhoLower(a) => (ExperimentKind::RhoLower, a),
        Command::InterpCheck(a) => (ExperimentKind::InterpCheck, a),
    };
    match execute(kind, args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_exit_code(&err))
        }
    }
}
