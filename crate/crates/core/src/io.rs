//! JSON schemas for algebras and metrics.
//!
//! Algebras: `{"dim": n, "field": "rational"|"float", "products": [{"i", "j", "coeffs"}]}`
//! with 1-based `i, j` and `coeffs` the components of `e_i • e_j`. Unlisted
//! products are zero. Metrics: `{"field", "entries"}` with the upper triangle
//! in row-major order. Scalars may be JSON numbers or strings such as `"-3/4"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::tensor::Bilinear;

/// Scalar field requested by an input file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Rational,
    Float,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    #[serde(default)]
    field: Field,
    #[serde(default)]
    products: Vec<ProductFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductFile {
    i: usize,
    j: usize,
    coeffs: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricFile {
    #[serde(default)]
    field: Field,
    entries: Vec<Value>,
}

/// A parsed algebra file; coefficients are kept exact until a backend is chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub field: Field,
    pub product: Bilinear<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub field: Field,
    pub dim: usize,
    pub upper: Vec<Rational>,
}

impl MetricSpec {
    pub fn metric<S: Scalar>(&self) -> Result<Metric<S>> {
        let upper: Vec<S> = self.upper.iter().map(S::from_rational).collect();
        Metric::from_upper_triangle(self.dim, &upper)
    }
}

fn scalar_from_json(value: &Value, path: &str) -> Result<Rational> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("{path}: expected a number or string, found {other}"))),
    };
    parse_rational(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra: {e}")))?;
    let n = file.dim;
    if n == 0 {
        return Err(Error::Parse("dim: must be at least 1".into()));
    }
    let mut product = Bilinear::zeros(n);
    let mut seen = std::collections::BTreeSet::new();
    for (p, entry) in file.products.iter().enumerate() {
        let path = format!("products[{p}]");
        for (name, idx) in [("i", entry.i), ("j", entry.j)] {
            if !(1..=n).contains(&idx) {
                return Err(Error::Parse(format!("{path}.{name}: {idx} is outside 1..={n}")));
            }
        }
        if !seen.insert((entry.i, entry.j)) {
            return Err(Error::Parse(format!("{path}: duplicate product e{} • e{}", entry.i, entry.j)));
        }
        if entry.coeffs.len() != n {
            return Err(Error::Parse(format!("{path}.coeffs: expected {n} entries, found {}", entry.coeffs.len())));
        }
        for (k, c) in entry.coeffs.iter().enumerate() {
            product.set(entry.i - 1, entry.j - 1, k, scalar_from_json(c, &format!("{path}.coeffs[{k}]"))?);
        }
    }
    Ok(AlgebraSpec { field: file.field, product })
}

pub fn parse_metric(text: &str) -> Result<MetricSpec> {
    let file: MetricFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("metric: {e}")))?;
    let len = file.entries.len();
    let dim = (1..=len).find(|n| n * (n + 1) / 2 == len).ok_or_else(|| {
        Error::Parse(format!("entries: {len} values is not the upper triangle of a square matrix"))
    })?;
    let upper = file
        .entries
        .iter()
        .enumerate()
        .map(|(k, v)| scalar_from_json(v, &format!("entries[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricSpec { field: file.field, dim, upper })
}

/// Serializes a product in the algebra schema, omitting zero products.
pub fn algebra_to_json(product: &Bilinear<Rational>) -> Value {
    let n = product.dim();
    let products: Vec<Value> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| product.at(i, j).iter().any(|c| !c.is_exact_zero()))
        .map(|(i, j)| {
            let coeffs: Vec<String> = product.at(i, j).iter().map(format_rational).collect();
            json!({ "i": i + 1, "j": j + 1, "coeffs": coeffs })
        })
        .collect();
    json!({ "dim": n, "field": "rational", "products": products })
}

pub fn metric_to_json(g: &Metric<Rational>) -> Value {
    let n = g.dim();
    let entries: Vec<String> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| format_rational(g.entry(i, j))).collect();
    json!({ "field": "rational", "entries": entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn algebra_round_trips() {
        let text = r#"{"dim": 2, "products": [{"i": 1, "j": 1, "coeffs": [0, "1/2"]}, {"i": 2, "j": 1, "coeffs": [0.25, -1]}]}"#;
        let spec = parse_algebra(text).unwrap();
        assert_eq!(spec.field, Field::Rational);
        assert_eq!(spec.product.get(0, 0, 1), &q(1, 2));
        assert_eq!(spec.product.get(1, 0, 0), &q(1, 4));
        let again = parse_algebra(&algebra_to_json(&spec.product).to_string()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn algebra_diagnostics_name_the_field() {
        let err = parse_algebra(r#"{"dim": 2, "products": [{"i": 3, "j": 1, "coeffs": [0, 0]}]}"#).unwrap_err();
        assert!(err.to_string().contains("products[0].i"), "{err}");
        let err = parse_algebra(r#"{"dim": 2, "products": [{"i": 1, "j": 1, "coeffs": [0]}]}"#).unwrap_err();
        assert!(err.to_string().contains("products[0].coeffs"), "{err}");
        let err = parse_algebra(r#"{"dim": 2, "products": [{"i": 1, "j": 1, "coeffs": [0, "x"]}]}"#).unwrap_err();
        assert!(err.to_string().contains("products[0].coeffs[1]"), "{err}");
        assert!(parse_algebra(r#"{"dim": 2, "extra": 1}"#).is_err());
        assert!(parse_algebra("{").unwrap_err().to_string().contains("line 1"));
    }

    #[test]
    fn metric_upper_triangle() {
        let spec = parse_metric(r#"{"field": "float", "entries": [2, "1/2", 1]}"#).unwrap();
        assert_eq!((spec.field, spec.dim), (Field::Float, 2));
        let g = spec.metric::<Rational>().unwrap();
        assert_eq!(g.entry(1, 0), &q(1, 2));
        assert_eq!(parse_metric(&metric_to_json(&g).to_string()).unwrap().upper, vec![qi(2), q(1, 2), qi(1)]);
        assert!(parse_metric(r#"{"entries": [1, 0]}"#).is_err());
        assert!(parse_metric(r#"{"entries": [1, 2, 1]}"#).unwrap().metric::<Rational>().is_err());
    }
}
