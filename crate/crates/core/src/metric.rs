//! Positive-definite scalar products with a cached inverse.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, PIVOT_TOL};
use crate::scalar::Scalar;

/// Tolerance on `G·Ginv − I` for the float backend.
pub const INVERSE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Metric<S> {
    g: Matrix<S>,
    inv: Matrix<S>,
}

impl<S: Scalar> Metric<S> {
    /// Validates symmetry (exact), positive definiteness and invertibility.
    pub fn new(g: Matrix<S>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::Shape(format!("metric is {}x{}", g.rows(), g.cols())));
        }
        if let Some(p) = g.entries().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { location: format!("G entry {p}") });
        }
        if let Some((i, j)) = g.is_symmetric(0.0) {
            return Err(Error::NotSymmetric(i, j));
        }
        check_positive_definite(&g)?;
        let inv = g.inverse().ok_or(Error::SingularMetric)?;
        if !S::EXACT {
            let defect = g.mul(&inv).sub(&Matrix::identity(g.rows())).max_abs();
            if defect > INVERSE_TOL {
                return Err(Error::SingularMetric);
            }
        }
        Ok(Metric { g, inv })
    }

    pub fn identity(n: usize) -> Self {
        Metric { g: Matrix::identity(n), inv: Matrix::identity(n) }
    }

    /// Builds a metric from the row-major upper triangle.
    pub fn from_upper_triangle(n: usize, upper: &[S]) -> Result<Self> {
        if upper.len() != n * (n + 1) / 2 {
            return Err(Error::Shape(format!(
                "upper triangle of a {n}x{n} metric needs {} entries, got {}",
                n * (n + 1) / 2,
                upper.len()
            )));
        }
        let mut g = Matrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().expect("length checked").clone();
                g.set(i, j, v.clone());
                g.set(j, i, v);
            }
        }
        Self::new(g)
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.g
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.inv
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        self.g.get(i, j)
    }

    pub fn inv_entry(&self, i: usize, j: usize) -> &S {
        self.inv.get(i, j)
    }

    pub fn inner(&self, u: &[S], v: &[S]) -> S {
        linalg::dot(u, &self.g.mul_vec(v))
    }

    /// Covector `⟨v, ·⟩`.
    pub fn lower(&self, v: &[S]) -> Vec<S> {
        self.g.mul_vec(v)
    }

    /// Vector dual to a covector.
    pub fn raise(&self, eta: &[S]) -> Vec<S> {
        self.inv.mul_vec(eta)
    }

    pub fn norm_squared(&self, v: &[S]) -> S {
        self.inner(v, v)
    }

    /// `λ·G` for positive `λ`.
    pub fn scaled(&self, lambda: &S) -> Result<Self> {
        Self::new(self.g.scale(lambda))
    }

    /// Pulls the metric back to the basis `f_a = Σ_i P[i][a] e_i`, i.e. `PᵀGP`.
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        Self::new(p.transpose().mul(&self.g).mul(p))
    }

    /// Orthogonal direct sum `⟨(a,b),(c,d)⟩ = ⟨a,c⟩ + ⟨b,d⟩` of two copies of `self`.
    pub fn doubled(&self) -> Self {
        let n = self.dim();
        let block = |m: &Matrix<S>| {
            Matrix::from_fn(2 * n, 2 * n, |i, j| {
                if i / n == j / n {
                    m.get(i % n, j % n).clone()
                } else {
                    S::zero()
                }
            })
        };
        Metric { g: block(&self.g), inv: block(&self.inv) }
    }
}

fn check_positive_definite<S: Scalar>(g: &Matrix<S>) -> Result<()> {
    if S::EXACT {
        for (k, m) in g.leading_minors().into_iter().enumerate() {
            if !m.is_positive(0.0) {
                return Err(Error::NotPositiveDefinite { order: k + 1, value: m.to_f64() });
            }
        }
        return Ok(());
    }
    // LDLᵀ without pivoting; every pivot of a positive-definite matrix is positive.
    let n = g.rows();
    let mut a = g.clone();
    for k in 0..n {
        let pivot = a.get(k, k).clone();
        if !pivot.is_positive(PIVOT_TOL) {
            return Err(Error::NotPositiveDefinite { order: k + 1, value: pivot.to_f64() });
        }
        for i in k + 1..n {
            let factor = a.get(i, k).clone() / &pivot;
            for j in k + 1..n {
                let v = a.get(i, j).clone() - &(factor.clone() * a.get(k, j));
                a.set(i, j, v);
            }
        }
    }
    Ok(())
}
