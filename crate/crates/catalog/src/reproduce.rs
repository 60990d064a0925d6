//! Re-checks every table row on sampled metrics.

use gkforge_core::scalar::Rational;
use gkforge_core::{classify, Algebra, ClassificationReport, Scalar};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::entry::instantiate;
use crate::error::{CatalogError, Result};
use crate::row::{rows, sample_row, sample_violating, Backend, ConditionRow, Property, Sample};

/// Tolerance of float-backend rows.
pub const FLOAT_TOL: f64 = 1e-9;
/// Fraction of control samples that must lose the property.
const CONTROL_QUORUM: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Review,
    Unsampleable,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub sample: Value,
    /// Flag that decided the failure, or the error message.
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ControlReport {
    pub samples: usize,
    pub property_failed: usize,
    pub required: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsampleable: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub id: String,
    pub table: u32,
    pub entry: String,
    pub property: Property,
    pub backend: Backend,
    pub constraints: String,
    pub status: RowStatus,
    pub samples: usize,
    pub failures: Vec<Failure>,
    /// Passing samples of a balanced row whose adjoint Koszul form is not closed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lcb_violations: Option<usize>,
    pub control: Option<ControlReport>,
    pub review: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub unsampleable: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub review: usize,
    pub unsampleable: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TablesReport {
    pub schema: u32,
    pub seed: u64,
    pub samples_per_row: usize,
    pub tables: Vec<u32>,
    pub rows: Vec<RowReport>,
    pub summary: Summary,
}

impl TablesReport {
    /// No row failed outright; review rows are allowed.
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.unsampleable == 0
    }
}

fn classify_sample(row: &ConditionRow, s: &Sample) -> Result<ClassificationReport> {
    let alg = instantiate(row.entry, &s.params)?;
    Ok(match row.backend {
        Backend::Rational => classify(&alg, &s.metric::<Rational>()?, 1)?,
        Backend::Float => {
            let product = alg.product().map(|x| x.to_f64());
            let alg = Algebra::with_tolerance(product, FLOAT_TOL)?;
            classify(&alg, &s.metric::<f64>()?, 1)?
        }
    })
}

fn control(row: &ConditionRow, count: usize, seed: u64) -> Option<ControlReport> {
    if !row.iff || row.assign.is_empty() {
        return None;
    }
    let required = (CONTROL_QUORUM * count as f64).ceil() as usize;
    let samples = match sample_violating(row, count, seed) {
        Ok(s) => s,
        Err(e) => {
            return Some(ControlReport {
                samples: 0,
                property_failed: 0,
                required,
                passed: false,
                unsampleable: Some(e.to_string()),
            })
        }
    };
    let property_failed = samples
        .iter()
        .filter(|s| classify_sample(row, s).map_or(true, |r| row.property.check(&r).is_err()))
        .count();
    Some(ControlReport { samples: samples.len(), property_failed, required, passed: property_failed >= required, unsampleable: None })
}

pub fn reproduce_row(row: &ConditionRow, count: usize, seed: u64) -> RowReport {
    let mut report = RowReport {
        id: row.id.clone(),
        table: row.table,
        entry: row.entry.id.clone(),
        property: row.property,
        backend: row.backend,
        constraints: row.text.clone(),
        status: RowStatus::Pass,
        samples: 0,
        failures: vec![],
        lcb_violations: None,
        control: None,
        review: row.review.clone(),
        notes: row.notes.clone(),
        unsampleable: None,
    };
    let samples = match sample_row(row, count, seed) {
        Ok(s) => s,
        Err(e @ CatalogError::Unsatisfiable { .. }) => {
            report.unsampleable = Some(e.to_string());
            report.status = if row.review.is_some() { RowStatus::Review } else { RowStatus::Unsampleable };
            return report;
        }
        Err(e) => {
            report.failures.push(Failure { sample: Value::Null, reason: e.to_string() });
            report.status = RowStatus::Fail;
            return report;
        }
    };
    report.samples = samples.len();
    let mut lcb_violations = 0;
    for s in &samples {
        match classify_sample(row, s) {
            Ok(r) => match row.property.check(&r) {
                Ok(()) => {
                    if row.property == Property::BalancedNonkahler && !r.lcb.holds {
                        lcb_violations += 1;
                    }
                }
                Err(flag) => report.failures.push(Failure { sample: s.to_json(), reason: flag.to_string() }),
            },
            Err(e) => report.failures.push(Failure { sample: s.to_json(), reason: e.to_string() }),
        }
    }
    if row.property == Property::BalancedNonkahler {
        report.lcb_violations = Some(lcb_violations);
    }
    report.control = control(row, count, seed);
    let ok = report.failures.is_empty() && lcb_violations == 0 && report.control.as_ref().map_or(true, |c| c.passed);
    report.status = match (ok, row.review.is_some()) {
        (true, _) => RowStatus::Pass,
        (false, true) => RowStatus::Review,
        (false, false) => RowStatus::Fail,
    };
    report
}

/// Runs every row of the requested tables; rows are independent jobs and
/// the report keeps catalog order.
pub fn reproduce_tables(which: &[u32], samples_per_row: usize, seed: u64) -> TablesReport {
    let selected: Vec<&ConditionRow> = rows().iter().filter(|r| which.contains(&r.table)).collect();
    let reports: Vec<RowReport> = selected.par_iter().map(|r| reproduce_row(r, samples_per_row, seed)).collect();
    let count = |st| reports.iter().filter(|r| r.status == st).count();
    let summary = Summary {
        pass: count(RowStatus::Pass),
        fail: count(RowStatus::Fail),
        review: count(RowStatus::Review),
        unsampleable: count(RowStatus::Unsampleable),
    };
    let mut tables = which.to_vec();
    tables.sort_unstable();
    tables.dedup();
    TablesReport { schema: 1, seed, samples_per_row, tables, rows: reports, summary }
}
