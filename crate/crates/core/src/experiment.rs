//! Experiment assembly: validated configs, self-checking result tables,
//! and deterministic CSV/JSON rendering.
//!
//! Every runner recomputes the closed-form value of each column it emits
//! and records any disagreement as a violation, so a table that renders
//! without violations certifies itself. All randomness is derived from
//! the config seed per row; rendering uses round-trip decimal formatting,
//! so identical configs produce byte-identical output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::distance::{
    conjugate, convergence_diagnostics, exponent_serde, interpolation_check, rho_lower_bound,
    schatten_bound,
};
use crate::error::{Error, Result};
use crate::measure::{counterexample_measure, mc_expectation, GaussianMeasure};
use crate::operator::{norm_sq, SymOperator};
use crate::radial::{fit_tail_slope, schatten_growth_profile, RadialFunction, RadialProfile};
use crate::rng::derive_seed;

/// Which experiment to run; mirrors the CLI subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Counterexample,
    RadialGrowth,
    Bounds,
    RhoLower,
    InterpCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::RadialGrowth => "radial-growth",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::RhoLower => "rho-lower",
            ExperimentKind::InterpCheck => "interp-check",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_samples() -> usize {
    100_000
}

fn default_p() -> f64 {
    2.0
}

/// Experiment configuration. The JSON config file deserializes into this
/// structure; CLI flags override individual fields afterwards.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(with = "exponent_serde", default = "default_p")]
    pub p: f64,
    #[serde(default)]
    pub ns: Option<Vec<usize>>,
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default = "default_samples")]
    pub mc_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub dim_pad: usize,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub output: Option<String>,
    /// Radial profile for the growth sweep (config file only).
    #[serde(default)]
    pub profile: Option<RadialProfile<f64>>,
    /// Witness centers for the lower-bound sweep (config file only);
    /// zero-padded into each row's truncation dimension.
    #[serde(default)]
    pub centers: Option<Vec<Vec<f64>>>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            p: default_p(),
            ns: None,
            dims: None,
            mc_samples: default_samples(),
            seed: 0,
            dim_pad: 0,
            format: OutputFormat::default(),
            output: None,
            profile: None,
            centers: None,
        }
    }

    fn require_list<'a>(
        &'a self,
        list: &'a Option<Vec<usize>>,
        flag: &str,
        min_len: usize,
    ) -> Result<&'a [usize]> {
        let values = list
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{flag}: list is required")))?;
        if values.len() < min_len {
            return Err(Error::Config(format!(
                "{flag}: need at least {min_len} entries, got {}",
                values.len()
            )));
        }
        if values.contains(&0) {
            return Err(Error::Config(format!("{flag}: entries must be positive")));
        }
        for w in values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(format!(
                    "{flag}: list must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(values)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::Config(format!(
                "p: must lie in [1, inf], got {}",
                self.p
            )));
        }
        if self.mc_samples < 1000 {
            return Err(Error::Config(format!(
                "mc_samples: must be at least 1000, got {}",
                self.mc_samples
            )));
        }
        match self.experiment {
            ExperimentKind::Counterexample | ExperimentKind::Bounds | ExperimentKind::RhoLower => {
                self.require_list(&self.ns, "ns", 1)?;
            }
            ExperimentKind::RadialGrowth => {
                self.require_list(&self.dims, "dims", 3)?;
            }
            ExperimentKind::InterpCheck => {
                self.require_list(&self.dims, "dims", 1)?;
            }
        }
        Ok(())
    }
}

/// One table cell; floats render with round-trip decimal formatting and
/// serialize to JSON as numbers (infinities as the string "inf").
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v}"),
            Cell::Text(v) => v.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => serializer.serialize_i64(*v),
            Cell::Float(v) => {
                if v.is_finite() {
                    serializer.serialize_f64(*v)
                } else if v.is_infinite() && *v > 0.0 {
                    serializer.serialize_str("inf")
                } else if v.is_infinite() {
                    serializer.serialize_str("-inf")
                } else {
                    serializer.serialize_str("nan")
                }
            }
            Cell::Text(v) => serializer.serialize_str(v),
        }
    }
}

/// Result table with row-level data and run metadata.
#[derive(Clone, Debug)]
pub struct ExperimentTable {
    pub experiment: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ExperimentTable {
    /// CSV: header row plus one line per row; no metadata lines.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// JSON: one object with experiment name, metadata, columns, rows.
    pub fn to_json_string(&self) -> String {
        let mut meta = serde_json::Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        let value = serde_json::json!({
            "experiment": self.experiment,
            "meta": serde_json::Value::Object(meta),
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut text = serde_json::to_string_pretty(&value).expect("table serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv_string(),
            OutputFormat::Json => self.to_json_string(),
        }
    }
}

/// A finished run: the table plus any row-level invariant violations.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub table: ExperimentTable,
    pub violations: Vec<String>,
}

fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

fn base_meta(cfg: &ExperimentConfig, q: Option<f64>) -> Vec<(String, String)> {
    let mut meta = vec![("p".to_string(), format_exponent(cfg.p))];
    if let Some(q) = q {
        meta.push(("q".to_string(), format_exponent(q)));
    }
    meta.push(("mc_samples".to_string(), cfg.mc_samples.to_string()));
    meta.push(("seed".to_string(), cfg.seed.to_string()));
    meta.push(("dim_pad".to_string(), cfg.dim_pad.to_string()));
    meta
}

struct Checker {
    violations: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Self {
            violations: Vec::new(),
        }
    }

    fn close(&mut self, label: &str, actual: f64, expected: f64, tol: f64) {
        let defect = (actual - expected).abs();
        if defect.is_nan() || defect > tol {
            self.violations.push(format!(
                "{label}: got {actual}, expected {expected} (tolerance {tol:e})"
            ));
        }
    }

    fn at_most(&mut self, label: &str, actual: f64, bound: f64) {
        if actual.is_nan() || actual > bound {
            self.violations
                .push(format!("{label}: {actual} exceeds bound {bound}"));
        }
    }
}

/// Run the projection-family sweep: per n, the Schatten-q norm of the
/// covariance, the upper bound ½‖S_n‖_q, the convergence diagnostics
/// against the point mass, and the bounded witness E[exp(−‖X‖²)] both in
/// closed form and by Monte Carlo. For p = ∞ (q = 1) the norm column is
/// the non-vanishing trace norm; the sweep reports it rather than
/// refusing, since the contrast with p < ∞ is the point.
pub fn run_counterexample(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let ns = cfg.require_list(&cfg.ns, "ns", 1)?;
    let pair = conjugate(cfg.p)?;
    let mut checker = Checker::new();

    let columns = vec![
        "n".to_string(),
        "q".to_string(),
        "schatten_q_norm".to_string(),
        "rho_p_upper".to_string(),
        "sqrt_hs_gap".to_string(),
        "op_gap".to_string(),
        "second_moment".to_string(),
        "exp_witness_exact".to_string(),
        "exp_witness_mc".to_string(),
        "mc_stderr".to_string(),
    ];
    let mut rows = Vec::with_capacity(ns.len());

    for &n in ns {
        let d = n + cfg.dim_pad;
        let measure = counterexample_measure::<f64>(n, d)?;
        let point = GaussianMeasure::point_mass(d);

        let schatten_q = measure.covariance().schatten_norm(pair.q)?;
        let upper = schatten_bound(&measure, &point, cfg.p)?;
        let diag = convergence_diagnostics(&measure, &point)?;
        let second = measure.second_moment();
        let exact = measure.exp_neg_sqnorm()?;
        let mc = mc_expectation(
            &measure,
            cfg.mc_samples,
            derive_seed(cfg.seed, n as u64),
            |x| (-norm_sq(x)).exp(),
        )?;

        let nf = n as f64;
        let closed_norm = if pair.q.is_infinite() {
            1.0 / nf
        } else {
            nf.powf(1.0 / pair.q - 1.0)
        };
        let closed_witness = (1.0 + 2.0 / nf).powf(-nf / 2.0);
        let label = format!("n={n}");
        checker.close(&format!("{label} schatten_q_norm"), schatten_q, closed_norm, 1e-12);
        checker.close(&format!("{label} rho_p_upper"), upper, 0.5 * closed_norm, 1e-12);
        checker.close(&format!("{label} sqrt_hs_gap"), diag.sqrt_hs_gap, 1.0, 1e-12);
        checker.close(&format!("{label} op_gap"), diag.op_gap, 1.0 / nf, 1e-12);
        checker.close(&format!("{label} second_moment"), second, 1.0, 1e-12);
        checker.close(
            &format!("{label} exp_witness_exact"),
            exact,
            closed_witness,
            1e-12,
        );
        checker.close(
            &format!("{label} exp_witness_mc"),
            mc.mean,
            exact,
            4.0 * mc.stderr,
        );

        rows.push(vec![
            Cell::Int(n as i64),
            Cell::Float(pair.q),
            Cell::Float(schatten_q),
            Cell::Float(upper),
            Cell::Float(diag.sqrt_hs_gap),
            Cell::Float(diag.op_gap),
            Cell::Float(second),
            Cell::Float(exact),
            Cell::Float(mc.mean),
            Cell::Float(mc.stderr),
        ]);
    }

    Ok(ExperimentOutcome {
        table: ExperimentTable {
            experiment: ExperimentKind::Counterexample.name().to_string(),
            meta: base_meta(cfg, Some(pair.q)),
            columns,
            rows,
        },
        violations: checker.violations,
    })
}

/// Hessian Schatten-norm growth along a dimension sweep, with the fitted
/// log-log tail slope against the expected exponent 1/p (0 at p = ∞).
pub fn run_radial_growth(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let dims = cfg.require_list(&cfg.dims, "dims", 3)?;
    let profile = match &cfg.profile {
        Some(p) => p.clone(),
        None => RadialProfile::gauss_bump(1.0, 1.0)?,
    };
    let f = RadialFunction::at_origin(1, profile.clone());
    let points = schatten_growth_profile(&f, &[0.0], cfg.p, dims)?;
    let slope = fit_tail_slope(&points);
    let target = if cfg.p.is_infinite() { 0.0 } else { 1.0 / cfg.p };

    let mut checker = Checker::new();
    if profile.is_constant() {
        for (d, v) in &points {
            checker.close(&format!("d={d} norm"), *v, 0.0, 0.0);
        }
        checker.close("fitted_slope", slope, 0.0, 1e-12);
    } else if cfg.p.is_infinite() {
        let max = points.iter().map(|(_, v)| *v).fold(f64::MIN, f64::max);
        let min = points.iter().map(|(_, v)| *v).fold(f64::MAX, f64::min);
        checker.at_most("norm spread at p=inf", max - min, 1e-10);
        checker.close("fitted_slope", slope, target, 0.01);
    } else {
        checker.close("fitted_slope", slope, target, 0.05);
    }

    let columns = vec![
        "d".to_string(),
        "hessian_schatten_norm".to_string(),
        "fitted_slope".to_string(),
        "target_slope".to_string(),
    ];
    let rows = points
        .iter()
        .map(|(d, v)| {
            vec![
                Cell::Int(*d as i64),
                Cell::Float(*v),
                Cell::Float(slope),
                Cell::Float(target),
            ]
        })
        .collect();

    Ok(ExperimentOutcome {
        table: ExperimentTable {
            experiment: ExperimentKind::RadialGrowth.name().to_string(),
            meta: base_meta(cfg, None),
            columns,
            rows,
        },
        violations: checker.violations,
    })
}

/// Upper bound and diagnostics per n for the projection family against
/// the point mass.
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let ns = cfg.require_list(&cfg.ns, "ns", 1)?;
    let pair = conjugate(cfg.p)?;
    let mut checker = Checker::new();

    let columns = vec![
        "n".to_string(),
        "q".to_string(),
        "upper_bound".to_string(),
        "sqrt_hs_gap".to_string(),
        "op_gap".to_string(),
        "second_moment_gap".to_string(),
    ];
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let d = n + cfg.dim_pad;
        let measure = counterexample_measure::<f64>(n, d)?;
        let point = GaussianMeasure::point_mass(d);
        let upper = schatten_bound(&measure, &point, cfg.p)?;
        let diag = convergence_diagnostics(&measure, &point)?;

        let nf = n as f64;
        let closed_norm = if pair.q.is_infinite() {
            1.0 / nf
        } else {
            nf.powf(1.0 / pair.q - 1.0)
        };
        let label = format!("n={n}");
        checker.close(&format!("{label} upper_bound"), upper, 0.5 * closed_norm, 1e-12);
        checker.close(&format!("{label} sqrt_hs_gap"), diag.sqrt_hs_gap, 1.0, 1e-12);
        checker.close(&format!("{label} op_gap"), diag.op_gap, 1.0 / nf, 1e-12);
        checker.close(
            &format!("{label} second_moment_gap"),
            diag.second_moment_gap,
            1.0,
            1e-12,
        );

        rows.push(vec![
            Cell::Int(n as i64),
            Cell::Float(pair.q),
            Cell::Float(upper),
            Cell::Float(diag.sqrt_hs_gap),
            Cell::Float(diag.op_gap),
            Cell::Float(diag.second_moment_gap),
        ]);
    }

    Ok(ExperimentOutcome {
        table: ExperimentTable {
            experiment: ExperimentKind::Bounds.name().to_string(),
            meta: base_meta(cfg, Some(pair.q)),
            columns,
            rows,
        },
        violations: checker.violations,
    })
}

/// Certified lower bounds for the projection family against the point
/// mass, with the envelope check against the Schatten upper bound.
pub fn run_rho_lower(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let ns = cfg.require_list(&cfg.ns, "ns", 1)?;
    let pair = conjugate(cfg.p)?;
    let mut checker = Checker::new();

    let columns = vec![
        "n".to_string(),
        "q".to_string(),
        "lower_bound".to_string(),
        "mc_stderr".to_string(),
        "witness_sigma".to_string(),
        "constraint_value".to_string(),
        "upper_bound".to_string(),
    ];
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let d = n + cfg.dim_pad;
        let measure = counterexample_measure::<f64>(n, d)?;
        let point = GaussianMeasure::point_mass(d);
        let centers: Vec<Vec<f64>> = match &cfg.centers {
            Some(list) => list
                .iter()
                .map(|c| {
                    if c.len() > d {
                        Err(Error::Config(format!(
                            "centers: length {} exceeds truncation dimension {d}",
                            c.len()
                        )))
                    } else {
                        let mut padded = c.clone();
                        padded.resize(d, 0.0);
                        Ok(padded)
                    }
                })
                .collect::<Result<_>>()?,
            None => vec![vec![0.0; d]],
        };
        // Coarse ladder per center plus refinement headroom.
        let budget = 25 * centers.len() + 35;
        let cert = rho_lower_bound(
            &measure,
            &point,
            cfg.p,
            &centers,
            budget,
            cfg.mc_samples,
            derive_seed(cfg.seed, n as u64),
        )?;
        let upper = schatten_bound(&measure, &point, cfg.p)?;

        let label = format!("n={n}");
        checker.at_most(
            &format!("{label} envelope"),
            cert.value - 3.0 * cert.mc_stderr,
            upper + 1e-9,
        );
        checker.at_most(
            &format!("{label} constraint_value"),
            cert.constraint_value,
            1.0 + 1e-9,
        );

        let sigma = match cert.witness.profile() {
            RadialProfile::GaussBump { width, .. } => *width,
            RadialProfile::Constant { .. } => f64::NAN,
        };
        rows.push(vec![
            Cell::Int(n as i64),
            Cell::Float(pair.q),
            Cell::Float(cert.value),
            Cell::Float(cert.mc_stderr),
            Cell::Float(sigma),
            Cell::Float(cert.constraint_value),
            Cell::Float(upper),
        ]);
    }

    Ok(ExperimentOutcome {
        table: ExperimentTable {
            experiment: ExperimentKind::RhoLower.name().to_string(),
            meta: base_meta(cfg, Some(pair.q)),
            columns,
            rows,
        },
        violations: checker.violations,
    })
}

/// Interpolation-identity defect on the built-in geometric test pairs:
/// S₁ = diag(2⁰, 2⁻¹, …), S₂ = S₁/4, bump ψ(r) = e^{−r} at the origin.
pub fn run_interp_check(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let dims = cfg.require_list(&cfg.dims, "dims", 1)?;
    let mut checker = Checker::new();

    const T_NODES: usize = 16;

    let columns = vec![
        "d".to_string(),
        "t_nodes".to_string(),
        "mc_samples".to_string(),
        "relative_error".to_string(),
    ];
    let mut rows = Vec::with_capacity(dims.len());
    for &d in dims {
        let entries: Vec<f64> = (0..d).map(|i| 0.5f64.powi(i as i32)).collect();
        let s1 = SymOperator::diagonal(entries)?;
        let s2 = s1.scale(0.25);
        let g1 = GaussianMeasure::centered(s1)?;
        let g2 = GaussianMeasure::centered(s2)?;
        let f = RadialFunction::at_origin(d, RadialProfile::gauss_bump(1.0, 1.0)?);
        let rel = interpolation_check(
            &f,
            &g1,
            &g2,
            T_NODES,
            cfg.mc_samples,
            derive_seed(cfg.seed, d as u64),
        )?;
        checker.at_most(&format!("d={d} relative_error"), rel, 0.05);
        rows.push(vec![
            Cell::Int(d as i64),
            Cell::Int(T_NODES as i64),
            Cell::Int(cfg.mc_samples as i64),
            Cell::Float(rel),
        ]);
    }

    Ok(ExperimentOutcome {
        table: ExperimentTable {
            experiment: ExperimentKind::InterpCheck.name().to_string(),
            meta: base_meta(cfg, None),
            columns,
            rows,
        },
        violations: checker.violations,
    })
}

/// Dispatch on the configured experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    match cfg.experiment {
        ExperimentKind::Counterexample => run_counterexample(cfg),
        ExperimentKind::RadialGrowth => run_radial_growth(cfg),
        ExperimentKind::Bounds => run_bounds(cfg),
        ExperimentKind::RhoLower => run_rho_lower(cfg),
        ExperimentKind::InterpCheck => run_interp_check(cfg),
    }
}
