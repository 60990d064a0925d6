//! Metrics on boxes of `ℝⁿ` in the canonical affine coordinates.

use gkforge_core::linalg::Matrix;

use crate::error::{ChartError, Result};
use crate::expr::Expr;

/// Axis-aligned box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(ChartError::InvalidMetric("domain bounds must be non-empty and of equal length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(ChartError::InvalidMetric("domain needs finite bounds with lo < hi".into()));
        }
        Ok(BoxDomain { lo, hi })
    }

    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        BoxDomain { lo: vec![lo; n], hi: vec![hi; n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_origin(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(a, b)| *a <= 0.0 && 0.0 <= *b)
    }

    /// Largest `max(1, |x_k|)` over the box, which scales the default step.
    pub fn scale(&self) -> f64 {
        self.lo.iter().chain(&self.hi).fold(1.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Default central-difference step `∛ε · max(1, |x|)`.
pub fn default_fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// `G(x)` with optional analytic derivatives. `deriv1(x)[k]` is `∂_k G` and
/// `deriv2(x)[k][l]` is `∂_k ∂_l G`. Evaluation must be a pure function of `x`.
pub trait ChartMetric: Send + Sync {
    fn dim(&self) -> usize;

    fn domain(&self) -> &BoxDomain;

    fn eval(&self, x: &[f64]) -> Matrix<f64>;

    fn deriv1(&self, _x: &[f64]) -> Option<Vec<Matrix<f64>>> {
        None
    }

    fn deriv2(&self, _x: &[f64]) -> Option<Vec<Vec<Matrix<f64>>>> {
        None
    }

    fn fd_step(&self, x: f64) -> f64 {
        default_fd_step(x)
    }
}

/// Metric whose entries are expressions; derivatives are symbolic.
#[derive(Clone, Debug)]
pub struct ExprMetric {
    n: usize,
    domain: BoxDomain,
    entries: Vec<Expr>,
    d1: Vec<Vec<Expr>>,
    d2: Vec<Vec<Vec<Expr>>>,
}

impl ExprMetric {
    /// `upper` lists the upper triangle row by row.
    pub fn new(upper: Vec<Expr>, domain: BoxDomain) -> Result<Self> {
        let n = domain.dim();
        if upper.len() != n * (n + 1) / 2 {
            return Err(ChartError::InvalidMetric(format!(
                "{} entries given, a {n}-dimensional metric needs {}",
                upper.len(),
                n * (n + 1) / 2
            )));
        }
        if let Some(e) = upper.iter().find(|e| e.arity() > n) {
            return Err(ChartError::InvalidMetric(format!("entry {e} uses a variable beyond x{n}")));
        }
        let mut entries = vec![Expr::Num(0.0); n * n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i..n {
                let e = it.next().expect("counted above");
                entries[j * n + i] = e.clone();
                entries[i * n + j] = e;
            }
        }
        let d1: Vec<Vec<Expr>> = (0..n).map(|k| entries.iter().map(|e| e.diff(k)).collect()).collect();
        let d2 = d1.iter().map(|dk| (0..n).map(|l| dk.iter().map(|e| e.diff(l)).collect()).collect()).collect();
        Ok(ExprMetric { n, domain, entries, d1, d2 })
    }

    pub fn parse(upper: &[&str], domain: BoxDomain) -> Result<Self> {
        let exprs = upper.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(exprs, domain)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.n + j]
    }

    fn matrix_of(&self, exprs: &[Expr], x: &[f64]) -> Matrix<f64> {
        Matrix::from_fn(self.n, self.n, |i, j| exprs[i * self.n + j].eval(x))
    }
}

impl ChartMetric for ExprMetric {
    fn dim(&self) -> usize {
        self.n
    }

    fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    fn eval(&self, x: &[f64]) -> Matrix<f64> {
        self.matrix_of(&self.entries, x)
    }

    fn deriv1(&self, x: &[f64]) -> Option<Vec<Matrix<f64>>> {
        Some(self.d1.iter().map(|d| self.matrix_of(d, x)).collect())
    }

    fn deriv2(&self, x: &[f64]) -> Option<Vec<Vec<Matrix<f64>>>> {
        Some(self.d2.iter().map(|dk| dk.iter().map(|d| self.matrix_of(d, x)).collect()).collect())
    }
}

/// Wraps a metric and hides its analytic derivatives, forcing finite differences.
pub struct FiniteDifferenceOnly<M>(pub M);

impl<M: ChartMetric> ChartMetric for FiniteDifferenceOnly<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn domain(&self) -> &BoxDomain {
        self.0.domain()
    }

    fn eval(&self, x: &[f64]) -> Matrix<f64> {
        self.0.eval(x)
    }

    fn fd_step(&self, x: f64) -> f64 {
        self.0.fd_step(x)
    }
}

/// Scales the finite-difference step of a metric, for Richardson checks.
pub struct ScaledStep<'a> {
    pub inner: &'a dyn ChartMetric,
    pub factor: f64,
}

impl ChartMetric for ScaledStep<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn domain(&self) -> &BoxDomain {
        self.inner.domain()
    }

    fn eval(&self, x: &[f64]) -> Matrix<f64> {
        self.inner.eval(x)
    }

    fn fd_step(&self, x: f64) -> f64 {
        self.inner.fd_step(x) * self.factor
    }
}
