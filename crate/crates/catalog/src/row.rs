//! Metric conditions from the classification tables and a deterministic
//! rejection sampler over rationals.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use gkforge_core::scalar::{q, Rational, Scalar};
use gkforge_core::{ClassificationReport, Metric};
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entry::{entry, NovikovEntry};
use crate::error::{CatalogError, Result};
use crate::expr::{Expr, Field};

const CONDITIONS_JSON: &str = include_str!("../data/conditions.json");

/// Upper-triangle metric variables in storage order.
pub const METRIC_VARS: [&str; 6] = ["g11", "g12", "g13", "g22", "g23", "g33"];

/// Grid step for sampled free variables.
const GRID: i64 = 12;
/// Minimum slack on strict inequalities and on `≠` constraints.
pub fn margin() -> Rational {
    q(1, 100)
}
/// Attempts per row before it is declared unsatisfiable.
pub const ATTEMPT_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Kahler,
    Gauduchon,
    InfinitelyBalanced,
    BalancedNonkahler,
    PluriclosedNonkahler,
    CytNotInfinitelyBalanced,
}

impl Property {
    /// Whether the report has the property; on failure, the deciding flag.
    pub fn check(self, r: &ClassificationReport) -> std::result::Result<(), &'static str> {
        let need = |ok: bool, name| if ok { Ok(()) } else { Err(name) };
        match self {
            Property::Kahler => need(r.kahler.holds, "kahler"),
            Property::Gauduchon => need(r.gauduchon.holds, "gauduchon"),
            Property::InfinitelyBalanced => need(r.infinitely_balanced.holds, "infinitely_balanced"),
            Property::BalancedNonkahler => {
                need(r.balanced_at(1), "balanced_1").and(need(!r.kahler.holds, "kahler"))
            }
            Property::PluriclosedNonkahler => need(r.pluriclosed.holds, "pluriclosed").and(need(!r.kahler.holds, "kahler")),
            Property::CytNotInfinitelyBalanced => {
                need(r.cyt.holds, "cyt").and(need(!r.infinitely_balanced.holds, "infinitely_balanced"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

#[derive(Clone, Debug)]
pub enum Constraint {
    /// `lhs < rhs` with at least [`margin`] of slack.
    Less(Expr, Expr),
    /// Tuples differ in some component by at least [`margin`].
    NotEqual(Vec<Expr>, Vec<Expr>),
}

#[derive(Clone, Debug)]
pub struct TableSpec {
    pub table: u32,
    pub property: Property,
    /// Rows state necessary and sufficient conditions, so violating samples serve as controls.
    pub iff: bool,
}

#[derive(Clone, Debug)]
pub struct ConditionRow {
    /// `"<table>.<position>"`, positions 1-based within the table.
    pub id: String,
    pub table: u32,
    pub entry: &'static NovikovEntry,
    pub property: Property,
    pub iff: bool,
    pub backend: Backend,
    pub choices: Vec<(String, Vec<Rational>)>,
    /// Substitutions applied in order after free variables are drawn.
    pub assign: Vec<(String, Expr)>,
    pub conditions: Vec<(String, Constraint)>,
    pub review: Option<String>,
    /// Deliberate departures from the printed row.
    pub notes: Option<String>,
    /// Constraints as encoded, for traceability.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub params: BTreeMap<String, Rational>,
    /// Upper triangle in [`METRIC_VARS`] order.
    pub metric: Vec<Rational>,
}

impl Sample {
    pub fn metric<S: Scalar>(&self) -> Result<Metric<S>> {
        let upper: Vec<S> = self.metric.iter().map(S::from_rational).collect();
        Ok(Metric::from_upper_triangle(3, &upper)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: serde_json::Map<_, _> =
            self.params.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.to_string()))).collect();
        let metric: serde_json::Map<_, _> = METRIC_VARS
            .iter()
            .zip(&self.metric)
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
            .collect();
        serde_json::json!({ "params": params, "metric": metric })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConditions {
    schema: u32,
    tables: Vec<RawTable>,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    table: u32,
    property: Property,
    iff: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    table: u32,
    entry: String,
    #[serde(default)]
    choices: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    assign: Vec<String>,
    #[serde(default)]
    conditions: Vec<String>,
    #[serde(default)]
    review: Option<String>,
    #[serde(default)]
    field: Option<Backend>,
    #[serde(default)]
    notes: Option<String>,
}

pub fn tables() -> &'static [TableSpec] {
    &loaded().0
}

pub fn rows() -> &'static [ConditionRow] {
    &loaded().1
}

fn loaded() -> &'static (Vec<TableSpec>, Vec<ConditionRow>) {
    static CELL: OnceLock<(Vec<TableSpec>, Vec<ConditionRow>)> = OnceLock::new();
    CELL.get_or_init(|| load(CONDITIONS_JSON).expect("bundled condition tables are valid"))
}

fn parse_constraint(text: &str) -> Result<Constraint> {
    let tuple = |s: &str| -> Result<Vec<Expr>> {
        let s = s.trim();
        match s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            Some(inner) if inner.contains(',') => inner.split(',').map(Expr::parse).collect(),
            _ => Ok(vec![Expr::parse(s)?]),
        }
    };
    if let Some((l, r)) = text.split_once("!=") {
        let (l, r) = (tuple(l)?, tuple(r)?);
        if l.len() != r.len() {
            return Err(CatalogError::Data(format!("tuple lengths differ in `{text}`")));
        }
        return Ok(Constraint::NotEqual(l, r));
    }
    if let Some((l, r)) = text.split_once('<') {
        return Ok(Constraint::Less(Expr::parse(l)?, Expr::parse(r)?));
    }
    Err(CatalogError::Data(format!("constraint `{text}` is neither `<` nor `!=`")))
}

fn load(text: &str) -> Result<(Vec<TableSpec>, Vec<ConditionRow>)> {
    let raw: RawConditions = serde_json::from_str(text).map_err(|e| CatalogError::Data(e.to_string()))?;
    if raw.schema != 1 {
        return Err(CatalogError::Data(format!("unsupported schema {}", raw.schema)));
    }
    let tables: Vec<TableSpec> =
        raw.tables.into_iter().map(|t| TableSpec { table: t.table, property: t.property, iff: t.iff }).collect();
    let mut positions: BTreeMap<u32, usize> = BTreeMap::new();
    let mut rows = Vec::with_capacity(raw.rows.len());
    for r in raw.rows {
        let spec = tables
            .iter()
            .find(|t| t.table == r.table)
            .ok_or_else(|| CatalogError::Data(format!("row for undeclared table {}", r.table)))?;
        let pos = positions.entry(r.table).or_insert(0);
        *pos += 1;
        let id = format!("{}.{}", r.table, pos);
        let entry = entry(&r.entry)?;
        let choices = r
            .choices
            .into_iter()
            .map(|(k, vs)| {
                let values = vs.iter().map(|v| Expr::parse(v)?.eval::<Rational>(&BTreeMap::new())).collect::<Result<Vec<Rational>>>()?;
                Ok((k, values))
            })
            .collect::<Result<Vec<_>>>()?;
        let assign = r
            .assign
            .iter()
            .map(|a| {
                let (lhs, rhs) =
                    a.split_once('=').ok_or_else(|| CatalogError::Data(format!("{id}: assignment `{a}` lacks `=`")))?;
                Ok((lhs.trim().to_string(), Expr::parse(rhs)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let conditions =
            r.conditions.iter().map(|c| Ok((c.clone(), parse_constraint(c)?))).collect::<Result<Vec<_>>>()?;
        let has_sqrt = assign.iter().any(|(_, e)| e.has_sqrt())
            || conditions.iter().any(|(_, c)| match c {
                Constraint::Less(a, b) => a.has_sqrt() || b.has_sqrt(),
                Constraint::NotEqual(a, b) => a.iter().chain(b).any(Expr::has_sqrt),
            });
        let backend = r.field.unwrap_or(Backend::Rational);
        if has_sqrt && backend != Backend::Float {
            return Err(CatalogError::Data(format!("{id}: square roots require the float backend")));
        }
        let mut text_parts: Vec<String> = choices
            .iter()
            .map(|(k, vs)| format!("{k} in {{{}}}", vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        text_parts.extend(r.assign.iter().cloned());
        text_parts.extend(r.conditions.iter().cloned());
        let text = if text_parts.is_empty() { "always".to_string() } else { text_parts.join(", ") };
        let row = ConditionRow {
            id,
            table: r.table,
            entry,
            property: spec.property,
            iff: spec.iff,
            backend,
            choices,
            assign,
            conditions,
            review: r.review,
            notes: r.notes,
            text,
        };
        row.validate()?;
        rows.push(row);
    }
    Ok((tables, rows))
}

/// Outcome of one draw.
enum Draw {
    Accepted(Sample),
    Rejected(String),
}

impl ConditionRow {
    pub fn variables(&self) -> Vec<String> {
        self.entry.params.iter().cloned().chain(METRIC_VARS.iter().map(|s| s.to_string())).collect()
    }

    fn validate(&self) -> Result<()> {
        let vars = self.variables();
        let bad = |m: String| CatalogError::Data(format!("row {}: {m}", self.id));
        let mut bound: Vec<String> = self.choices.iter().map(|(k, _)| k.clone()).collect();
        for (lhs, _) in &self.assign {
            if bound.contains(lhs) {
                return Err(bad(format!("{lhs} is constrained twice")));
            }
            bound.push(lhs.clone());
        }
        if let Some(v) = bound.iter().find(|v| !vars.contains(v)) {
            return Err(bad(format!("unknown variable {v}")));
        }
        // Assignments may only read free variables and earlier assignments.
        for (n, (lhs, rhs)) in self.assign.iter().enumerate() {
            let later: Vec<&String> = self.assign[n..].iter().map(|(l, _)| l).collect();
            if let Some(v) = rhs.vars().iter().find(|v| later.contains(v) || !vars.contains(v)) {
                return Err(bad(format!("{lhs} reads {v} before it is available")));
            }
        }
        Ok(())
    }

    fn free_variables(&self, dropped: Option<usize>) -> Vec<String> {
        self.variables()
            .into_iter()
            .filter(|v| {
                !self.choices.iter().any(|(k, _)| k == v)
                    && !self.assign.iter().enumerate().any(|(n, (k, _))| k == v && Some(n) != dropped)
            })
            .collect()
    }

    fn draw<R: Rng>(&self, rng: &mut R, dropped: Option<usize>) -> Draw {
        let mut env: BTreeMap<String, Rational> = BTreeMap::new();
        for (k, vs) in &self.choices {
            env.insert(k.clone(), vs.choose(rng).expect("non-empty choice").clone());
        }
        for v in self.free_variables(dropped) {
            let k = match v.as_str() {
                "g11" | "g22" | "g33" => rng.gen_range(1..=4 * GRID),
                "g12" | "g13" | "g23" => rng.gen_range(-2 * GRID..=2 * GRID),
                _ => rng.gen_range(-3 * GRID..=3 * GRID),
            };
            env.insert(v, q(k, GRID));
        }
        for (n, (lhs, rhs)) in self.assign.iter().enumerate() {
            let value = match rhs.eval(&env) {
                Ok(v) => v,
                Err(e) => return Draw::Rejected(format!("{lhs} = {rhs}: {e}")),
            };
            if Some(n) == dropped {
                // A control sample must break this equality by at least the margin.
                let gap = env[lhs].clone() - &value;
                if gap.abs() < margin() {
                    return Draw::Rejected(format!("{lhs} not violated"));
                }
                continue;
            }
            env.insert(lhs.clone(), value);
        }
        let ok = match self.backend {
            Backend::Rational => self.conditions_hold::<Rational>(&env),
            Backend::Float => {
                let fenv = env.iter().map(|(k, v)| (k.clone(), v.to_f64())).collect();
                self.conditions_hold::<f64>(&fenv)
            }
        };
        if let Err(reason) = ok {
            return Draw::Rejected(reason);
        }
        let sample = Sample {
            params: self.entry.params.iter().map(|p| (p.clone(), env[p].clone())).collect(),
            metric: METRIC_VARS.iter().map(|v| env[*v].clone()).collect(),
        };
        match sample.metric::<Rational>() {
            Ok(_) => Draw::Accepted(sample),
            Err(_) => Draw::Rejected("metric not positive definite".into()),
        }
    }

    fn conditions_hold<S: Field>(&self, env: &BTreeMap<String, S>) -> std::result::Result<(), String> {
        let m = S::from_rational(&margin());
        for (text, c) in &self.conditions {
            let holds = match c {
                Constraint::Less(l, r) => {
                    let slack = r.eval(env).and_then(|r| Ok(r - &l.eval(env)?));
                    slack.map(|s| at_least(s, &m))
                }
                Constraint::NotEqual(l, r) => l
                    .iter()
                    .zip(r)
                    .map(|(a, b)| {
                        let d = a.eval(env)? - &b.eval(env)?;
                        Ok(at_least(d.clone(), &m) || at_least(-d, &m))
                    })
                    .collect::<Result<Vec<bool>>>()
                    .map(|v| v.into_iter().any(|x| x)),
            };
            match holds {
                Ok(true) => {}
                Ok(false) => return Err(text.clone()),
                Err(e) => return Err(format!("{text}: {e}")),
            }
        }
        Ok(())
    }

    fn sample_with(&self, count: usize, mut rng: ChaCha8Rng, controls: bool) -> Result<Vec<Sample>> {
        let droppable: Vec<usize> = if controls { (0..self.assign.len()).collect() } else { vec![] };
        if controls && droppable.is_empty() {
            return Ok(vec![]);
        }
        let mut out = Vec::with_capacity(count);
        let mut rejections: BTreeMap<String, usize> = BTreeMap::new();
        let mut tried = 0;
        while out.len() < count {
            if tried == ATTEMPT_BUDGET {
                let reason = rejections
                    .iter()
                    .max_by_key(|(_, n)| **n)
                    .map_or_else(|| "none".to_string(), |(r, n)| format!("{r} ({n} times)"));
                return Err(CatalogError::Unsatisfiable { row: self.id.clone(), tried, reason });
            }
            tried += 1;
            let dropped = (!droppable.is_empty()).then(|| droppable[out.len() % droppable.len()]);
            match self.draw(&mut rng, dropped) {
                Draw::Accepted(s) => out.push(s),
                Draw::Rejected(r) => *rejections.entry(r).or_insert(0) += 1,
            }
        }
        Ok(out)
    }

    fn rng(&self, seed: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index = rows().iter().position(|r| r.id == self.id).unwrap_or(0) as u64;
        rng.set_stream(index * 2 + stream);
        rng
    }
}

fn at_least<S: Scalar>(x: S, bound: &S) -> bool {
    let d = x - bound;
    d.is_positive(0.0) || d.is_exact_zero()
}

/// `count` admissible `(params, metric)` pairs; deterministic in `seed`.
pub fn sample_row(row: &ConditionRow, count: usize, seed: u64) -> Result<Vec<Sample>> {
    row.sample_with(count, row.rng(seed, 0), false)
}

/// Samples that satisfy every constraint except one equality, which they
/// break; equalities take turns. Empty for rows without equalities.
pub fn sample_violating(row: &ConditionRow, count: usize, seed: u64) -> Result<Vec<Sample>> {
    row.sample_with(count, row.rng(seed, 1), true)
}

pub fn row(id: &str) -> Option<&'static ConditionRow> {
    rows().iter().find(|r| r.id == id)
}
