//! Three-dimensional Novikov algebras with parameter-dependent structure
//! constants and the brackets of their phase algebras.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use gkforge_core::scalar::Rational;
use gkforge_core::{phase, validate_algebra, Algebra, Bilinear, Metric};
use serde::Deserialize;

use crate::error::{CatalogError, Result};
use crate::expr::Expr;

const NOVIKOV_JSON: &str = include_str!("../data/novikov.json");

const E: [&str; 3] = ["e1", "e2", "e3"];
const F: [&str; 6] = ["f1", "f2", "f3", "f4", "f5", "f6"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    schema: u32,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    params: Vec<String>,
    product: BTreeMap<String, String>,
    brackets: BTreeMap<String, String>,
    #[serde(default)]
    notes: Option<String>,
}

#[derive(Clone, Debug)]
pub struct NovikovEntry {
    pub id: String,
    /// Parameter names; every real value is admissible.
    pub params: Vec<String>,
    /// `(i, j, e_i•e_j)` as a linear form in `e1..e3`.
    pub product: Vec<(usize, usize, Expr)>,
    /// `(x, y, [f_x, f_y])` for `x < y` as a linear form in `f1..f6`; unlisted pairs vanish.
    pub brackets: Vec<(usize, usize, Expr)>,
    /// Corrections applied to the printed data.
    pub notes: Option<String>,
}

pub fn entries() -> &'static [NovikovEntry] {
    static CELL: OnceLock<Vec<NovikovEntry>> = OnceLock::new();
    CELL.get_or_init(|| load(NOVIKOV_JSON).expect("bundled Novikov catalog is valid"))
}

pub fn entry(id: &str) -> Result<&'static NovikovEntry> {
    entries().iter().find(|e| e.id == id).ok_or_else(|| CatalogError::UnknownEntry(id.to_string()))
}

fn pair_key(key: &str, letter: char, dim: usize) -> Result<(usize, usize)> {
    let bad = || CatalogError::Data(format!("malformed key {key:?}"));
    let rest = key.strip_prefix(letter).ok_or_else(bad)?;
    let (a, b) = rest.split_once(letter).ok_or_else(bad)?;
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if !(1..=dim).contains(&a) || !(1..=dim).contains(&b) {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

fn load(text: &str) -> Result<Vec<NovikovEntry>> {
    let raw: RawCatalog = serde_json::from_str(text).map_err(|e| CatalogError::Data(e.to_string()))?;
    if raw.schema != 1 {
        return Err(CatalogError::Data(format!("unsupported schema {}", raw.schema)));
    }
    raw.entries
        .into_iter()
        .map(|r| {
            let product = r
                .product
                .iter()
                .map(|(k, v)| Ok((pair_key(k, 'e', 3)?.0, pair_key(k, 'e', 3)?.1, Expr::parse(v)?)))
                .collect::<Result<Vec<_>>>()?;
            let brackets = r
                .brackets
                .iter()
                .map(|(k, v)| {
                    let (x, y) = pair_key(k, 'f', 6)?;
                    if x >= y {
                        return Err(CatalogError::Data(format!("{}: bracket key {k} is not increasing", r.id)));
                    }
                    Ok((x, y, Expr::parse(v)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(NovikovEntry { id: r.id, params: r.params, product, brackets, notes: r.notes })
        })
        .collect()
}

impl NovikovEntry {
    fn check_params(&self, params: &BTreeMap<String, Rational>) -> Result<()> {
        let inadmissible = |reason: String| CatalogError::InadmissibleParams { entry: self.id.clone(), reason };
        for p in &self.params {
            if !params.contains_key(p) {
                return Err(inadmissible(format!("missing parameter {p}")));
            }
        }
        if let Some(extra) = params.keys().find(|k| !self.params.contains(k)) {
            return Err(inadmissible(format!("unknown parameter {extra}")));
        }
        Ok(())
    }

    pub fn product_at(&self, params: &BTreeMap<String, Rational>) -> Result<Bilinear<Rational>> {
        self.check_params(params)?;
        let mut b = Bilinear::zeros(3);
        for (i, j, e) in &self.product {
            for (k, c) in e.linear_coefficients(&E, params)?.into_iter().enumerate() {
                b.set(*i, *j, k, c);
            }
        }
        Ok(b)
    }

    /// The listed `f`-basis brackets, extended by antisymmetry.
    pub fn table_bracket(&self, params: &BTreeMap<String, Rational>) -> Result<Bilinear<Rational>> {
        self.check_params(params)?;
        let mut b = Bilinear::zeros(6);
        for (x, y, e) in &self.brackets {
            for (k, c) in e.linear_coefficients(&F, params)?.into_iter().enumerate() {
                b.set(*y, *x, k, -c.clone());
                b.set(*x, *y, k, c);
            }
        }
        Ok(b)
    }
}

/// Validated Novikov algebra of `entry` at `params`, after checking the
/// phase-algebra bracket against the tabulated one.
pub fn instantiate(entry: &NovikovEntry, params: &BTreeMap<String, Rational>) -> Result<Algebra<Rational>> {
    let alg = validate_algebra(entry.product_at(params)?)?;
    if !alg.is_novikov() {
        return Err(CatalogError::Data(format!("{}: right multiplications do not commute", entry.id)));
    }
    let ps = phase(&alg, &Metric::identity(3))?;
    let expected = entry.table_bracket(params)?;
    let computed = ps.algebra().bracket();
    for x in 0..6 {
        for y in x + 1..6 {
            if expected.at(x, y) != computed.at(x, y) {
                let render = |v: &[Rational]| v.iter().map(ToString::to_string).collect();
                return Err(CatalogError::BracketMismatch {
                    entry: entry.id.clone(),
                    pair: (x, y),
                    expected: render(expected.at(x, y)),
                    computed: render(computed.at(x, y)),
                });
            }
        }
    }
    Ok(alg)
}
