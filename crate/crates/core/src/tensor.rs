//! Bilinear maps `V × V → V` stored as structure constants, and operator-valued
//! two-argument maps such as curvature.

use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

/// `B(e_i, e_j) = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilinear<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Bilinear<S> {
    pub fn zeros(dim: usize) -> Self {
        Bilinear { dim, data: vec![S::zero(); dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<S>) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                assert_eq!(v.len(), dim, "bilinear value has wrong length");
                data.extend(v);
            }
        }
        Bilinear { dim, data }
    }

    /// Builds `B` from left operators: column `j` of `ops[i]` is `B(e_i, e_j)`.
    pub fn from_left_operators(ops: &[Matrix<S>]) -> Self {
        let dim = ops.len();
        Self::from_fn(dim, |i, j| ops[i].column(j))
    }

    pub fn from_flat(dim: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), dim * dim * dim, "structure constants length");
        Bilinear { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: S) {
        let n = self.dim;
        self.data[(i * n + j) * n + k] = value;
    }

    /// Coefficients of `B(e_i, e_j)`.
    pub fn at(&self, i: usize, j: usize) -> &[S] {
        let start = (i * self.dim + j) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn apply(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_exact_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_exact_zero() {
                    continue;
                }
                let c = ui.clone() * vj;
                for (k, o) in out.iter_mut().enumerate() {
                    let b = self.get(i, j, k);
                    if !b.is_exact_zero() {
                        *o += &(c.clone() * b);
                    }
                }
            }
        }
        out
    }

    /// `B(e_i, v)`.
    pub fn apply_left_basis(&self, i: usize, v: &[S]) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_exact_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j, k);
                if !b.is_exact_zero() {
                    *o += &(vj.clone() * b);
                }
            }
        }
        out
    }

    /// `B(u, e_j)`.
    pub fn apply_right_basis(&self, u: &[S], j: usize) -> Vec<S> {
        let n = self.dim;
        let mut out = vec![S::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_exact_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j, k);
                if !b.is_exact_zero() {
                    *o += &(ui.clone() * b);
                }
            }
        }
        out
    }

    /// Matrix of `v ↦ B(e_i, v)`; column `j` holds `B(e_i, e_j)`.
    pub fn left_operator(&self, i: usize) -> Matrix<S> {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, j| self.get(i, j, k).clone())
    }

    /// Matrix of `v ↦ B(u, v)`.
    pub fn left_operator_of(&self, u: &[S]) -> Matrix<S> {
        let n = self.dim;
        let cols: Vec<Vec<S>> = (0..n).map(|j| self.apply_right_basis(u, j)).collect();
        Matrix::from_columns(&cols)
    }

    /// Matrix of `u ↦ B(u, e_j)`.
    pub fn right_operator(&self, j: usize) -> Matrix<S> {
        let n = self.dim;
        Matrix::from_fn(n, n, |k, i| self.get(i, j, k).clone())
    }

    pub fn left_operators(&self) -> Vec<Matrix<S>> {
        (0..self.dim).map(|i| self.left_operator(i)).collect()
    }

    /// `B'(u, v) = B(v, u)`.
    pub fn swapped(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(j, i).to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        Bilinear { dim: self.dim, data: self.data.iter().map(|a| a.clone() * s).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Bilinear<T> {
        Bilinear { dim: self.dim, data: self.data.iter().map(f).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.dim, other.dim, "bilinear dimension");
        Bilinear { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// First `(i, j, k)` in lexicographic order whose coefficient is not negligible.
    pub fn first_nonzero(&self, tol: f64) -> Option<((usize, usize, usize), S)> {
        let n = self.dim;
        self.data
            .iter()
            .position(|x| !x.is_negligible(tol))
            .map(|p| ((p / (n * n), (p / n) % n, p % n), self.data[p].clone()))
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs_vec(&self.data)
    }

    /// Expresses the map in a new basis `f_a = Σ_i P[i][a] e_i`.
    pub fn change_basis(&self, p: &Matrix<S>, p_inv: &Matrix<S>) -> Self {
        let n = self.dim;
        let cols: Vec<Vec<S>> = (0..n).map(|a| p.column(a)).collect();
        Self::from_fn(n, |a, b| p_inv.mul_vec(&self.apply(&cols[a], &cols[b])))
    }
}

/// Operator-valued map `(u, v) ↦ T(u, v)`, stored per basis pair.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPairs<S> {
    dim: usize,
    ops: Vec<Matrix<S>>,
}

impl<S: Scalar> OperatorPairs<S> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Matrix<S>) -> Self {
        let mut ops = Vec::with_capacity(dim * dim);
        for u in 0..dim {
            for v in 0..dim {
                ops.push(f(u, v));
            }
        }
        OperatorPairs { dim, ops }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> &Matrix<S> {
        &self.ops[u * self.dim + v]
    }

    /// First `(u, v, row, col)` whose entry is not negligible.
    pub fn first_nonzero(&self, tol: f64) -> Option<((usize, usize, usize, usize), S)> {
        for u in 0..self.dim {
            for v in 0..self.dim {
                if let Some((r, c, x)) = self.get(u, v).first_nonzero(tol) {
                    return Some(((u, v, r, c), x));
                }
            }
        }
        None
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |u, v| self.get(u, v).sub(other.get(u, v)))
    }

    pub fn max_abs(&self) -> f64 {
        self.ops.iter().map(Matrix::max_abs).fold(0.0, f64::max)
    }
}

/// Trilinear map `(x, y, z) ↦ T(x, y, z) ∈ V`, stored densely; used for covariant
/// derivatives of bilinear maps.
#[derive(Clone, Debug, PartialEq)]
pub struct Trilinear<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Trilinear<S> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Vec<S>) -> Self {
        let mut data = Vec::with_capacity(dim.pow(4));
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    data.extend(f(x, y, z));
                }
            }
        }
        Trilinear { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, x: usize, y: usize, z: usize) -> &[S] {
        let n = self.dim;
        let start = ((x * n + y) * n + z) * n;
        &self.data[start..start + n]
    }

    pub fn first_nonzero(&self, tol: f64) -> Option<((usize, usize, usize, usize), S)> {
        let n = self.dim;
        self.data.iter().position(|v| !v.is_negligible(tol)).map(|p| {
            ((p / (n * n * n), (p / (n * n)) % n, (p / n) % n, p % n), self.data[p].clone())
        })
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs_vec(&self.data)
    }
}
