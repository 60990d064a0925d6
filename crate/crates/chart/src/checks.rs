//! Koszul forms and the Hessian, balanced and pluriclosed criteria at sample
//! points, plus Christoffel-based Ricci quantities.
//!
//! A criterion holds when the largest residual over the plan is below the
//! tolerance: the plan's own, else 1e−7 with analytic derivatives and 1e−4
//! with finite differences. Results are evidence at samples, not proofs.

use gkforge_core::linalg::Matrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ChartError, Result};
use crate::fd::{jet, DerivativeSource, Jet};
use crate::metric::{ChartMetric, FiniteDifferenceOnly, ScaledStep};
use crate::sample::SamplePlan;

pub const ANALYTIC_TOL: f64 = 1e-7;
pub const FD_TOL: f64 = 1e-4;

pub fn default_tolerance(source: DerivativeSource) -> f64 {
    match source {
        DerivativeSource::Analytic => ANALYTIC_TOL,
        DerivativeSource::FiniteDifference => FD_TOL,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub holds: bool,
    pub max_residual: f64,
    /// Sample point attaining `max_residual`.
    pub argmax: Vec<f64>,
    pub tolerance: f64,
    pub source: DerivativeSource,
    pub samples: usize,
    pub sampled: bool,
}

fn inverse_at(g: &Matrix<f64>, x: &[f64]) -> Result<Matrix<f64>> {
    g.inverse().ok_or_else(|| ChartError::SingularMetricAtPoint { point: x.to_vec() })
}

fn require_positive(g: &Matrix<f64>, x: &[f64]) -> Result<()> {
    if g.leading_minors().iter().all(|m| *m > 0.0) {
        Ok(())
    } else {
        Err(ChartError::NotPositiveDefinite { point: x.to_vec() })
    }
}

/// Runs `residual` at every sample in parallel; ties keep the earliest point.
fn run_check(
    m: &dyn ChartMetric,
    plan: &SamplePlan,
    name: &str,
    second: bool,
    residual: impl Fn(&Jet, &[f64]) -> Result<f64> + Sync,
) -> Result<CheckReport> {
    let per_point: Vec<(f64, DerivativeSource)> = plan
        .points
        .par_iter()
        .map(|x| {
            let j = jet(m, x, second);
            require_positive(&j.g, x)?;
            Ok((residual(&j, x)?, j.source))
        })
        .collect::<Result<_>>()?;
    let source = if per_point.iter().all(|(_, s)| *s == DerivativeSource::Analytic) {
        DerivativeSource::Analytic
    } else {
        DerivativeSource::FiniteDifference
    };
    let tolerance = plan.tolerance.unwrap_or_else(|| default_tolerance(source));
    let mut worst = (0.0_f64, 0usize);
    for (i, (r, _)) in per_point.iter().enumerate() {
        // NaN counts as the worst possible residual.
        let r = if r.is_nan() { f64::INFINITY } else { *r };
        if r > worst.0 {
            worst = (r, i);
        }
    }
    Ok(CheckReport {
        check: name.to_string(),
        holds: worst.0 < tolerance,
        max_residual: worst.0,
        argmax: plan.points.get(worst.1).cloned().unwrap_or_default(),
        tolerance,
        source,
        samples: plan.points.len(),
        sampled: true,
    })
}

fn koszul_from_jet(j: &Jet, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = j.g.rows();
    let ginv = inverse_at(&j.g, x)?;
    let alpha: Vec<f64> = (0..n).map(|k| 0.5 * ginv.mul(&j.d1[k]).trace()).collect();
    let xi = (0..n)
        .map(|jj| {
            let mut acc = 0.0;
            for k in 0..n {
                for h in 0..n {
                    acc += ginv.get(k, h) * j.d1[k].get(jj, h);
                }
            }
            acc - alpha[jj]
        })
        .collect();
    Ok((alpha, xi))
}

/// `(α, ξ)` with `α_j = ½ ∂_j ln det G` and `ξ_j = Σ μ^{kh} ∂_k μ_{jh} − α_j`.
pub fn koszul_at(m: &dyn ChartMetric, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    koszul_from_jet(&jet(m, x, false), x)
}

/// `tr γ` as a vector, `G⁻¹ ξ`.
pub fn trace_gamma_at(m: &dyn ChartMetric, x: &[f64]) -> Result<Vec<f64>> {
    let j = jet(m, x, false);
    let (_, xi) = koszul_from_jet(&j, x)?;
    Ok(inverse_at(&j.g, x)?.mul_vec(&xi))
}

fn codazzi_residual(j: &Jet) -> f64 {
    let n = j.g.rows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                worst = worst.max((j.d1[i].get(jj, k) - j.d1[jj].get(i, k)).abs());
            }
        }
    }
    worst
}

/// `∂_i μ_{jk}` totally symmetric.
pub fn hessian_check(m: &dyn ChartMetric, plan: &SamplePlan) -> Result<CheckReport> {
    run_check(m, plan, "hessian", false, |j, _| Ok(codazzi_residual(j)))
}

/// `ξ = (2^k − 1) α`.
pub fn balanced_k_check(m: &dyn ChartMetric, plan: &SamplePlan, k: u32) -> Result<CheckReport> {
    let factor = f64::from((1u32 << k) - 1);
    run_check(m, plan, &format!("balanced:k={k}"), false, |j, x| {
        let (alpha, xi) = koszul_from_jet(j, x)?;
        Ok(alpha.iter().zip(&xi).fold(0.0_f64, |w, (a, b)| w.max((b - factor * a).abs())))
    })
}

/// `∂_j∂_h μ_{ik} + ∂_i∂_k μ_{jh} = ∂_i∂_h μ_{jk} + ∂_j∂_k μ_{ih}` for `i < j`, `k < h`.
pub fn pluriclosed_check(m: &dyn ChartMetric, plan: &SamplePlan) -> Result<CheckReport> {
    run_check(m, plan, "pluriclosed", true, |j, _| {
        let d2 = j.d2.as_ref().expect("second derivatives requested");
        let n = j.g.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for jj in i + 1..n {
                for k in 0..n {
                    for h in k + 1..n {
                        let r = d2[jj][h].get(i, k) + d2[i][k].get(jj, h) - d2[i][h].get(jj, k) - d2[jj][k].get(i, h);
                        worst = worst.max(r.abs());
                    }
                }
            }
        }
        Ok(worst)
    })
}

/// `|det G − target|`.
pub fn determinant_check(m: &dyn ChartMetric, plan: &SamplePlan, target: f64) -> Result<CheckReport> {
    run_check(m, plan, "determinant", false, |j, _| Ok((j.g.det() - target).abs()))
}

/// Largest component of `tr γ`.
pub fn trace_gamma_check(m: &dyn ChartMetric, plan: &SamplePlan) -> Result<CheckReport> {
    run_check(m, plan, "trace_gamma", false, |j, x| {
        let (_, xi) = koszul_from_jet(j, x)?;
        let tr = inverse_at(&j.g, x)?.mul_vec(&xi);
        Ok(tr.iter().fold(0.0_f64, |w, v| w.max(v.abs())))
    })
}

/// Analytic first and second derivatives agree with central differences to
/// 1e−5 relative. Metrics without analytic derivatives pass trivially.
///
/// Second differences are taken at the step `ε^{1/4}·max(1,|x|)`, which
/// balances truncation against rounding; at the default `∛ε` step rounding
/// alone is of order 1e−5.
pub fn derivative_sanity_check(m: &dyn ChartMetric, plan: &SamplePlan) -> Result<CheckReport> {
    let fd = FiniteDifferenceOnly(Wrapped(m));
    let coarse = FiniteDifferenceOnly(ScaledStep { inner: m, factor: f64::EPSILON.powf(0.25 - 1.0 / 3.0) });
    let mut report = run_check(m, plan, "derivative_sanity", true, |j, x| {
        if j.source != DerivativeSource::Analytic {
            return Ok(0.0);
        }
        let approx = jet(&fd, x, false);
        let approx2 = jet(&coarse, x, true);
        let rel = |a: &Matrix<f64>, b: &Matrix<f64>| {
            a.entries().iter().zip(b.entries()).fold(0.0_f64, |w, (p, q)| w.max((p - q).abs() / p.abs().max(1.0)))
        };
        let mut worst = 0.0_f64;
        for k in 0..x.len() {
            worst = worst.max(rel(&j.d1[k], &approx.d1[k]));
            for l in 0..x.len() {
                worst = worst.max(rel(&j.d2.as_ref().unwrap()[k][l], &approx2.d2.as_ref().unwrap()[k][l]));
            }
        }
        Ok(worst)
    })?;
    report.tolerance = 1e-5;
    report.holds = report.max_residual < report.tolerance;
    Ok(report)
}

/// Borrowing adapter so a `&dyn ChartMetric` can be wrapped by value.
struct Wrapped<'a>(&'a dyn ChartMetric);

impl ChartMetric for Wrapped<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn domain(&self) -> &crate::metric::BoxDomain {
        self.0.domain()
    }
    fn eval(&self, x: &[f64]) -> Matrix<f64> {
        self.0.eval(x)
    }
    fn fd_step(&self, x: f64) -> f64 {
        self.0.fd_step(x)
    }
}

/// `ops[b]` is the operator `γ_{∂_b}`, with entry `(a, c)` equal to `Γ^a_{bc}`.
pub fn christoffel_at(m: &dyn ChartMetric, x: &[f64]) -> Result<Vec<Matrix<f64>>> {
    christoffel_from_jet(&jet(m, x, false), x)
}

fn christoffel_from_jet(j: &Jet, x: &[f64]) -> Result<Vec<Matrix<f64>>> {
    let n = j.g.rows();
    let ginv = inverse_at(&j.g, x)?;
    Ok((0..n)
        .map(|b| {
            Matrix::from_fn(n, n, |a, c| {
                (0..n)
                    .map(|d| 0.5 * ginv.get(a, d) * (j.d1[b].get(d, c) + j.d1[c].get(d, b) - j.d1[d].get(b, c)))
                    .sum()
            })
        })
        .collect())
}

fn combine(ops: &[Matrix<f64>], u: &[f64]) -> Matrix<f64> {
    let n = ops[0].rows();
    ops.iter().zip(u).fold(Matrix::zeros(n, n), |acc, (op, c)| acc.add(&op.scale(c)))
}

/// `tr(γ_u²)`, the Ricci quadratic form of a Hessian metric. Fails with
/// `NotHessian` when the Codazzi residual at `x` exceeds the default tolerance.
pub fn ricci_quadratic_at(m: &dyn ChartMetric, x: &[f64], u: &[f64]) -> Result<f64> {
    let j = jet(m, x, false);
    let residual = codazzi_residual(&j);
    if residual >= default_tolerance(j.source) {
        return Err(ChartError::NotHessian { point: x.to_vec(), residual });
    }
    let gu = combine(&christoffel_from_jet(&j, x)?, u);
    Ok(gu.mul(&gu).trace())
}

/// Smallest eigenvalue of the Ricci quadratic form at every sample; the check
/// holds when none is below `−tolerance`.
pub fn ricci_nonnegative_check(m: &dyn ChartMetric, plan: &SamplePlan) -> Result<CheckReport> {
    run_check(m, plan, "ricci_nonnegative", false, |j, x| {
        let residual = codazzi_residual(j);
        if residual >= default_tolerance(j.source) {
            return Err(ChartError::NotHessian { point: x.to_vec(), residual });
        }
        let ops = christoffel_from_jet(j, x)?;
        let n = ops.len();
        let q = nalgebra::DMatrix::from_fn(n, n, |b, d| ops[b].mul(&ops[d]).trace());
        let min = q.symmetric_eigenvalues().min();
        Ok((-min).max(0.0))
    })
}

/// `Ric(u, u)` from the Riemann tensor, with Christoffel symbols differentiated
/// by central differences. Independent of the Hessian shortcut.
pub fn ricci_fd_oracle(m: &dyn ChartMetric, x: &[f64], u: &[f64]) -> Result<f64> {
    let n = m.dim();
    let gamma = christoffel_at(m, x)?;
    // dgamma[e][b] = ∂_e γ_b
    let mut dgamma = Vec::with_capacity(n);
    for e in 0..n {
        let h = m.fd_step(x[e]);
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[e] += h;
        minus[e] -= h;
        let gp = christoffel_at(m, &plus)?;
        let gm = christoffel_at(m, &minus)?;
        dgamma.push(gp.iter().zip(&gm).map(|(p, q)| p.sub(q).scale(&(0.5 / h))).collect::<Vec<_>>());
    }
    // [R(∂_c, ∂_d)∂_b]^a = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} − Γ^a_{de} Γ^e_{cb}
    let riemann = |a: usize, b: usize, c: usize, d: usize| {
        let mut r = dgamma[c][d].get(a, b) - dgamma[d][c].get(a, b);
        for e in 0..n {
            r += gamma[c].get(a, e) * gamma[d].get(e, b) - gamma[d].get(a, e) * gamma[c].get(e, b);
        }
        r
    };
    // Ric(Y, Z) = tr(X ↦ R(X, Y)Z)
    let mut total = 0.0;
    for b in 0..n {
        for d in 0..n {
            let ric: f64 = (0..n).map(|c| riemann(c, d, c, b)).sum();
            total += ric * u[b] * u[d];
        }
    }
    Ok(total)
}

/// Observed convergence of the finite-difference Koszul forms at `x` over the
/// steps `h, h/2, h/4` with `h = base_factor · fd_step`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Richardson {
    pub step: f64,
    pub diffs: [f64; 2],
    /// `log₂(diffs[0] / diffs[1])`; about 2 for central differences.
    pub order: f64,
}

pub fn richardson_koszul(m: &dyn ChartMetric, x: &[f64], base_factor: f64) -> Result<Richardson> {
    let at = |factor: f64| -> Result<Vec<f64>> {
        let scaled = FiniteDifferenceOnly(ScaledStep { inner: m, factor });
        let (a, xi) = koszul_at(&scaled, x)?;
        Ok(a.into_iter().chain(xi).collect())
    };
    let q0 = at(base_factor)?;
    let q1 = at(base_factor / 2.0)?;
    let q2 = at(base_factor / 4.0)?;
    let dist = |p: &[f64], q: &[f64]| p.iter().zip(q).fold(0.0_f64, |w, (a, b)| w.max((a - b).abs()));
    let diffs = [dist(&q0, &q1), dist(&q1, &q2)];
    let step = base_factor * m.fd_step(x.iter().fold(0.0_f64, |w, v| w.max(v.abs())));
    Ok(Richardson { step, diffs, order: (diffs[0] / diffs[1]).log2() })
}
