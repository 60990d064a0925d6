//! Command-line runs: one JSON report per invocation and an exit status that
//! says whether every assertion of the run held.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gkforge_catalog::{named_fixtures, reproduce_tables};
use gkforge_chart::config::{parse_chart_metric, parse_checks, run_check};
use gkforge_chart::{ChartError, ChartMetric, SamplePlan};
use gkforge_core::classify::{scalar_json, DEFAULT_K_MAX};
use gkforge_core::io::{parse_algebra, parse_metric, Field};
use gkforge_core::lift::{iterate_lift, DEFAULT_DIM_CAP};
use gkforge_core::scalar::DEFAULT_TOL;
use gkforge_core::{classify, AffineRiemann, Algebra, Metric, Scalar};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;
/// Tables whose rows ship with the catalog.
pub const TABLES: [u32; 6] = [3, 4, 5, 6, 7, 8];

#[derive(Debug, Parser)]
#[command(name = "gkforge", version, about = "Affine-Riemann structures and the Hermitian structures of their tangent lifts")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the first lift of an algebra with a metric.
    Classify {
        #[command(flatten)]
        instance: Instance,
        /// Highest level for the balanced criterion.
        #[arg(long = "kmax", default_value_t = DEFAULT_K_MAX as u64, value_parser = clap::value_parser!(u64).range(1..))]
        k_max: u64,
    },
    /// Iterate tangent lifts and check the Koszul-form recursion at every level.
    Lift {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Largest lifted dimension allowed.
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        cap: usize,
    },
    /// Evaluate PDE criteria of a chart metric at sample points.
    Chart {
        #[arg(long)]
        metric: PathBuf,
        /// Comma-separated checks, e.g. `balanced:k=2,pluriclosed,hessian`.
        #[arg(long)]
        check: String,
        /// Residual threshold; defaults depend on the derivative source.
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-check the catalog tables on sampled metrics.
    Tables {
        /// Comma-separated table numbers.
        #[arg(long, default_value = "3,4,5,6,7,8", value_parser = table_list)]
        which: TableList,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the named worked instances.
    Fixtures,
}

#[derive(Debug, clap::Args)]
pub struct Instance {
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long)]
    pub metric: PathBuf,
    /// Backend override; otherwise float if either file asks for it.
    #[arg(long, value_enum)]
    pub field: Option<Backend>,
    /// Zero threshold of the float backend.
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Rational,
    Float,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableList(pub Vec<u32>);

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

fn table_list(s: &str) -> Result<TableList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let t: u32 = part.parse().map_err(|_| format!("{part:?} is not a table number"))?;
        if !TABLES.contains(&t) {
            return Err(format!("table {t} is not in the catalog (have {TABLES:?})"));
        }
        out.push(t);
    }
    if out.is_empty() {
        return Err("no tables given".into());
    }
    Ok(TableList(out))
}

/// Input or usage problems; these map to exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(context: impl fmt::Display, e: impl fmt::Display) -> InputError {
    InputError(format!("{context}: {e}"))
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    /// Every assertion of the run held.
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| input(path.display(), e))
}

pub fn run(config: &RunConfig) -> Result<Outcome, InputError> {
    match &config.command {
        Command::Classify { instance, k_max } => with_backend(instance, ClassifyJob { k_max: *k_max as usize }),
        Command::Lift { instance, k, cap } => with_backend(instance, LiftJob { k: *k as usize, cap: *cap }),
        Command::Chart { metric, check, tol, samples, seed } => chart_run(metric, check, *tol, *samples, *seed),
        Command::Tables { which, samples, seed } => {
            let report = reproduce_tables(&which.0, *samples, *seed);
            let passed = report.all_passed();
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["command"] = json!("tables");
            Ok(Outcome { report: value, passed })
        }
        Command::Fixtures => {
            let report = named_fixtures();
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["command"] = json!("fixtures");
            Ok(Outcome { report: value, passed: report.passed })
        }
    }
}

/// Work on a validated instance, generic over the scalar field.
trait InstanceJob {
    fn run<S: Scalar>(&self, ar: AffineRiemann<S>) -> Result<Outcome, InputError>;
}

/// Reads the instance files and dispatches on the chosen scalar field.
fn with_backend(instance: &Instance, job: impl InstanceJob) -> Result<Outcome, InputError> {
    let alg_spec = parse_algebra(&read(&instance.algebra)?).map_err(|e| input(instance.algebra.display(), e))?;
    let metric_spec = parse_metric(&read(&instance.metric)?).map_err(|e| input(instance.metric.display(), e))?;
    if metric_spec.dim != alg_spec.product.dim() {
        return Err(InputError(format!(
            "metric has dimension {} but the algebra has dimension {}",
            metric_spec.dim,
            alg_spec.product.dim()
        )));
    }
    let from_files = if alg_spec.field == Field::Float || metric_spec.field == Field::Float {
        Backend::Float
    } else {
        Backend::Rational
    };
    let backend = instance.field.unwrap_or(from_files);
    let outcome = match backend {
        Backend::Rational => job.run(structure(instance, alg_spec.product, metric_spec.metric())?),
        Backend::Float => job.run(structure(instance, alg_spec.product.map(|x| x.to_f64()), metric_spec.metric())?),
    }?;
    let mut report = outcome.report;
    report["field"] = json!(match backend {
        Backend::Rational => "rational",
        Backend::Float => "float",
    });
    Ok(Outcome { report, passed: outcome.passed })
}

fn structure<S: Scalar>(
    instance: &Instance,
    product: gkforge_core::Bilinear<S>,
    g: gkforge_core::Result<Metric<S>>,
) -> Result<AffineRiemann<S>, InputError> {
    let alg = Algebra::with_tolerance(product, instance.tol).map_err(|e| input(instance.algebra.display(), e))?;
    alg.require_left_symmetric().map_err(|e| input(instance.algebra.display(), e))?;
    let g = g.map_err(|e| input(instance.metric.display(), e))?;
    AffineRiemann::new(alg, g).map_err(|e| InputError(e.to_string()))
}

struct ClassifyJob {
    k_max: usize,
}

impl InstanceJob for ClassifyJob {
    fn run<S: Scalar>(&self, ar: AffineRiemann<S>) -> Result<Outcome, InputError> {
        let report = classify(ar.algebra(), ar.metric(), self.k_max).map_err(|e| InputError(e.to_string()))?;
        let dt = ar.difference();
        let report = json!({
            "schema": SCHEMA,
            "command": "classify",
            "dim": ar.dim(),
            "k_max": self.k_max,
            "tr_gamma": dt.tr_gamma().iter().map(scalar_json).collect::<Vec<_>>(),
            "tr_gamma_star": dt.tr_gamma_star().iter().map(scalar_json).collect::<Vec<_>>(),
            "flags": report.to_json(),
        });
        Ok(Outcome { report, passed: true })
    }
}

struct LiftJob {
    k: usize,
    cap: usize,
}

impl InstanceJob for LiftJob {
    fn run<S: Scalar>(&self, ar: AffineRiemann<S>) -> Result<Outcome, InputError> {
        let levels = iterate_lift(&ar, self.k, self.cap).map_err(|e| InputError(e.to_string()))?;
        let mut passed = true;
        let rendered: Vec<Value> = levels
            .iter()
            .map(|l| {
                let defect = l.recursion_defect(&ar);
                passed &= defect.is_none();
                json!({
                    "level": l.level,
                    "dim": l.dim(),
                    "theta": l.theta.iter().map(scalar_json).collect::<Vec<_>>(),
                    "balanced": l.is_balanced(),
                    "recursion_defect": defect,
                    "flags": l.report.to_json(),
                })
            })
            .collect();
        let report = json!({ "schema": SCHEMA, "command": "lift", "base_dim": ar.dim(), "k": self.k, "levels": rendered });
        Ok(Outcome { report, passed })
    }
}

/// Point-wise failures of a chart metric are results; everything else is bad input.
fn chart_failure(e: &ChartError) -> bool {
    matches!(e, ChartError::SingularMetricAtPoint { .. } | ChartError::NotPositiveDefinite { .. } | ChartError::NotHessian { .. })
}

fn chart_run(path: &Path, checks: &str, tol: Option<f64>, samples: usize, seed: u64) -> Result<Outcome, InputError> {
    let metric = parse_chart_metric(&read(path)?).map_err(|e| input(path.display(), e))?;
    let specs = parse_checks(checks).map_err(|e| input("--check", e))?;
    if specs.is_empty() {
        return Err(InputError("--check: no checks given".into()));
    }
    let mut plan = SamplePlan::halton(metric.domain(), samples, seed).map_err(|e| input(path.display(), e))?;
    if let Some(t) = tol {
        plan = plan.with_tolerance(t);
    }
    let mut passed = true;
    let mut results = Vec::with_capacity(specs.len());
    for spec in &specs {
        match run_check(&metric, &plan, spec) {
            Ok(r) => {
                passed &= r.holds;
                results.push(serde_json::to_value(&r).expect("check report serializes"));
            }
            Err(e) if chart_failure(&e) => {
                passed = false;
                results.push(json!({ "check": format!("{spec:?}"), "holds": false, "error": e.to_string() }));
            }
            Err(e) => return Err(input(path.display(), e)),
        }
    }
    let report = json!({
        "schema": SCHEMA,
        "command": "chart",
        "dim": metric.dim(),
        "samples": samples,
        "seed": seed,
        "checks": results,
    });
    Ok(Outcome { report, passed })
}

/// Caps the global rayon pool from `GKFORGE_THREADS`, when set.
pub fn configure_threads() -> Result<(), InputError> {
    let Ok(text) = std::env::var("GKFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = match text.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return Err(InputError(format!("GKFORGE_THREADS: {text:?} is not a positive integer"))),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| input("GKFORGE_THREADS", e))
}

/// Pretty JSON with a trailing newline; identical inputs give identical bytes.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}
