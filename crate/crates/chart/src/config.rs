//! JSON metric definitions and check lists for the command line.
//!
//! A metric is either `{"builtin": name, "params": {..}, "domain": {..}}` or
//! `{"entries": [upper triangle], "domain": {"lo": [..], "hi": [..]}}` with
//! entries given as expressions or numbers.

use serde::Deserialize;
use serde_json::Value;

use crate::checks::{self, CheckReport};
use crate::error::{ChartError, Result};
use crate::expr::Expr;
use crate::fixtures;
use crate::metric::{BoxDomain, ChartMetric, ExprMetric};
use crate::sample::SamplePlan;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    builtin: Option<String>,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
    entries: Option<Vec<Value>>,
    domain: Option<DomainFile>,
}

fn param_f64(params: &serde_json::Map<String, Value>, name: &str, default: Option<f64>) -> Result<f64> {
    match params.get(name) {
        Some(v) => v.as_f64().ok_or_else(|| ChartError::Parse(format!("params.{name}: expected a number"))),
        None => default.ok_or_else(|| ChartError::Parse(format!("params.{name}: missing"))),
    }
}

fn param_str<'a>(params: &'a serde_json::Map<String, Value>, name: &str, default: &'a str) -> Result<&'a str> {
    match params.get(name) {
        Some(v) => v.as_str().ok_or_else(|| ChartError::Parse(format!("params.{name}: expected a string"))),
        None => Ok(default),
    }
}

fn param_strs(params: &serde_json::Map<String, Value>, name: &str) -> Result<Vec<String>> {
    let bad = || ChartError::Parse(format!("params.{name}: expected a list of expressions"));
    let list = params.get(name).and_then(Value::as_array).ok_or_else(bad)?;
    list.iter().map(|v| v.as_str().map(str::to_string).ok_or_else(bad)).collect()
}

fn param_usize(params: &serde_json::Map<String, Value>, name: &str, default: Option<usize>) -> Result<usize> {
    match params.get(name) {
        Some(v) => v
            .as_u64()
            .map(|u| u as usize)
            .ok_or_else(|| ChartError::Parse(format!("params.{name}: expected a non-negative integer"))),
        None => default.ok_or_else(|| ChartError::Parse(format!("params.{name}: missing"))),
    }
}

fn entry_expr(v: &Value, k: usize) -> Result<Expr> {
    match v {
        Value::String(s) => Expr::parse(s).map_err(|e| ChartError::Parse(format!("entries[{k}]: {e}"))),
        Value::Number(x) => Ok(Expr::Num(x.as_f64().expect("JSON numbers are finite"))),
        _ => Err(ChartError::Parse(format!("entries[{k}]: expected an expression string or number"))),
    }
}

pub fn parse_chart_metric(text: &str) -> Result<ExprMetric> {
    let file: MetricFile = serde_json::from_str(text).map_err(|e| ChartError::Parse(format!("chart metric: {e}")))?;
    let domain = file.domain.map(|d| BoxDomain::new(d.lo, d.hi)).transpose()?;
    let p = &file.params;
    match (file.builtin.as_deref(), file.entries) {
        (Some(_), Some(_)) => Err(ChartError::Parse("give either builtin or entries, not both".into())),
        (None, None) => Err(ChartError::Parse("missing builtin or entries".into())),
        (None, Some(entries)) => {
            let domain = domain.ok_or_else(|| ChartError::Parse("domain: required with entries".into()))?;
            let exprs = entries.iter().enumerate().map(|(k, v)| entry_expr(v, k)).collect::<Result<Vec<_>>>()?;
            ExprMetric::new(exprs, domain)
        }
        (Some(name), None) => {
            let cube2 = || BoxDomain::cube(2, -1.0, 1.0);
            match name {
                "exemple" => {
                    let n = param_usize(p, "n", None)?;
                    let c = param_f64(p, "c", Some(1.0))?;
                    fixtures::exemple_fixture_on(n, c, domain.unwrap_or_else(|| fixtures::exemple_domain(n)))
                }
                "exem2" => fixtures::exem2_fixture(param_str(p, "f", "x1 * x2")?, domain.unwrap_or_else(cube2)),
                "exem3" => fixtures::exem3_fixture(param_str(p, "f", "0")?, param_str(p, "h", "0")?, domain.unwrap_or_else(cube2)),
                "dim2" => fixtures::dim2_fixture(param_str(p, "f", "1")?, param_str(p, "h", "1")?, domain.unwrap_or_else(cube2)),
                "dimn" => {
                    let fs = param_strs(p, "f")?;
                    let refs: Vec<&str> = fs.iter().map(String::as_str).collect();
                    let k0 = param_usize(p, "k0", None)? as u32;
                    let dom = domain.unwrap_or_else(|| BoxDomain::cube(fs.len(), -1.0, 1.0));
                    fixtures::dimn_fixture(&refs, k0, dom)
                }
                "cop1" => {
                    let fs = param_strs(p, "f")?;
                    let refs: Vec<&str> = fs.iter().map(String::as_str).collect();
                    let dom = domain.unwrap_or_else(|| BoxDomain::cube(fs.len(), -1.0, 1.0));
                    fixtures::cop1_fixture(&refs, dom)
                }
                "pluriclosed_negative" => fixtures::pluriclosed_negative_control(domain.unwrap_or_else(cube2)),
                other => Err(ChartError::Parse(format!("builtin: unknown fixture {other:?}"))),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckSpec {
    Hessian,
    Balanced(u32),
    Pluriclosed,
    Determinant(f64),
    TraceGamma,
    RicciNonnegative,
    DerivativeSanity,
}

/// Parses `balanced:k=2,pluriclosed,hessian,det=1,trace_gamma,ricci,sanity`.
pub fn parse_checks(text: &str) -> Result<Vec<CheckSpec>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || ChartError::Parse(format!("unknown check {item:?}"));
            Ok(match item {
                "hessian" => CheckSpec::Hessian,
                "pluriclosed" => CheckSpec::Pluriclosed,
                "trace_gamma" => CheckSpec::TraceGamma,
                "ricci" => CheckSpec::RicciNonnegative,
                "sanity" => CheckSpec::DerivativeSanity,
                "det" => CheckSpec::Determinant(1.0),
                "balanced" => CheckSpec::Balanced(1),
                _ => {
                    if let Some(k) = item.strip_prefix("balanced:k=") {
                        let k: u32 = k.parse().map_err(|_| bad())?;
                        if !(1..=30).contains(&k) {
                            return Err(bad());
                        }
                        CheckSpec::Balanced(k)
                    } else if let Some(t) = item.strip_prefix("det=") {
                        CheckSpec::Determinant(t.parse().map_err(|_| bad())?)
                    } else {
                        return Err(bad());
                    }
                }
            })
        })
        .collect()
}

pub fn run_check(m: &dyn ChartMetric, plan: &SamplePlan, spec: &CheckSpec) -> Result<CheckReport> {
    match spec {
        CheckSpec::Hessian => checks::hessian_check(m, plan),
        CheckSpec::Balanced(k) => checks::balanced_k_check(m, plan, *k),
        CheckSpec::Pluriclosed => checks::pluriclosed_check(m, plan),
        CheckSpec::Determinant(t) => checks::determinant_check(m, plan, *t),
        CheckSpec::TraceGamma => checks::trace_gamma_check(m, plan),
        CheckSpec::RicciNonnegative => checks::ricci_nonnegative_check(m, plan),
        CheckSpec::DerivativeSanity => checks::derivative_sanity_check(m, plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lists() {
        assert_eq!(
            parse_checks("balanced:k=2, pluriclosed,hessian").unwrap(),
            vec![CheckSpec::Balanced(2), CheckSpec::Pluriclosed, CheckSpec::Hessian]
        );
        assert_eq!(parse_checks("det=1.5").unwrap(), vec![CheckSpec::Determinant(1.5)]);
        assert!(parse_checks("balanced:k=0").is_err());
        assert!(parse_checks("kahler").is_err());
    }

    #[test]
    fn metric_files() {
        let m = parse_chart_metric(r#"{"builtin": "exemple", "params": {"n": 3, "c": 2}}"#).unwrap();
        assert_eq!(m.dim(), 3);
        let m = parse_chart_metric(r#"{"entries": ["1 + x2^2", 0, 1], "domain": {"lo": [0, 0], "hi": [1, 1]}}"#).unwrap();
        assert_eq!(m.eval(&[0.5, 0.5]).get(0, 0), &1.25);
        assert!(parse_chart_metric(r#"{"entries": ["1"]}"#).is_err());
        assert!(parse_chart_metric(r#"{"builtin": "nope"}"#).is_err());
        let err = parse_chart_metric(r#"{"entries": ["1", "y", 1], "domain": {"lo": [0, 0], "hi": [1, 1]}}"#).unwrap_err();
        assert!(err.to_string().contains("entries[1]"), "{err}");
        assert!(parse_chart_metric(r#"{"builtin": "exemple", "params": {"n": 2}, "domain": {"lo": [-1, -1], "hi": [1, 1]}}"#).is_err());
    }
}
