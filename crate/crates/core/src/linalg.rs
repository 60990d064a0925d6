//! Dense matrices and vectors over a [`Scalar`] backend.

use crate::scalar::Scalar;

/// Pivot magnitude below which the float backend treats a matrix as singular.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; panics if they are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<S>]) -> Self {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    *out.get_mut(i, j) += &(a.clone() * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows).map(|i| dot_plain(self.row(i), v)).collect()
    }

    /// Row vector times matrix: `vᵀ M`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        (0..self.cols)
            .map(|j| {
                let mut acc = S::zero();
                for (i, vi) in v.iter().enumerate() {
                    if !vi.is_exact_zero() {
                        acc += &(vi.clone() * self.get(i, j));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|a| a.clone() * s)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "elementwise shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += self.get(i, i);
        }
        acc
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// First entry in row-major order that is not negligible.
    pub fn first_nonzero(&self, tol: f64) -> Option<(usize, usize, S)> {
        self.data
            .iter()
            .position(|x| !x.is_negligible(tol))
            .map(|p| (p / self.cols, p % self.cols, self.data[p].clone()))
    }

    /// Largest entry magnitude, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if !(self.get(i, j).clone() - self.get(j, i)).is_negligible(tol) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Gauss–Jordan inverse. Rationals pivot on the first nonzero entry; floats on the
    /// largest magnitude and fail below [`PIVOT_TOL`].
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = choose_pivot(&a, col, col)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col || a.get(r, col).is_exact_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                a.axpy_row(r, col, &factor);
                inv.axpy_row(r, col, &factor);
            }
        }
        Some(inv)
    }

    /// Determinant by fraction-free elimination on rationals and partial pivoting on floats.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(pivot) = choose_pivot_loose(&a, col, col) else {
                return S::zero();
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = det * &p;
            let pinv = p.recip();
            for r in col + 1..n {
                if a.get(r, col).is_exact_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone() * &pinv;
                a.axpy_row(r, col, &factor);
            }
        }
        det
    }

    /// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<S> {
        (1..=self.rows).map(|k| Self::from_fn(k, k, |i, j| self.get(i, j).clone()).det()).collect()
    }

    /// Basis of the right null space, from the reduced row echelon form.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        let (rref, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -rref.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot) = choose_pivot_tol(&a, row, col, tol) else {
                for r in row..self.rows {
                    a.set(r, col, S::zero());
                }
                continue;
            };
            a.swap_rows(row, pivot);
            let p = a.get(row, col).recip();
            a.scale_row(row, &p);
            for r in 0..self.rows {
                if r != row && !a.get(r, col).is_exact_zero() {
                    let factor = a.get(r, col).clone();
                    a.axpy_row(r, row, &factor);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &S) {
        for j in 0..self.cols {
            let v = self.get(r, j).clone() * s;
            self.set(r, j, v);
        }
    }

    /// `row[target] -= factor * row[source]`.
    fn axpy_row(&mut self, target: usize, source: usize, factor: &S) {
        for j in 0..self.cols {
            let s = self.get(source, j);
            if s.is_exact_zero() {
                continue;
            }
            let delta = factor.clone() * s;
            *self.get_mut(target, j) -= &delta;
        }
    }
}

fn choose_pivot<S: Scalar>(a: &Matrix<S>, from_row: usize, col: usize) -> Option<usize> {
    choose_pivot_tol(a, from_row, col, PIVOT_TOL)
}

fn choose_pivot_loose<S: Scalar>(a: &Matrix<S>, from_row: usize, col: usize) -> Option<usize> {
    choose_pivot_tol(a, from_row, col, 0.0)
}

fn choose_pivot_tol<S: Scalar>(a: &Matrix<S>, from_row: usize, col: usize, tol: f64) -> Option<usize> {
    if S::EXACT {
        (from_row..a.rows()).find(|&r| !a.get(r, col).is_exact_zero())
    } else {
        let (best, mag) = (from_row..a.rows())
            .map(|r| (r, a.get(r, col).abs_f64()))
            .fold((from_row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > tol).then_some(best)
    }
}

fn dot_plain<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_exact_zero() && !y.is_exact_zero() {
            acc += &(x.clone() * y);
        }
    }
    acc
}

/// Euclidean pairing `Σ aᵢbᵢ`.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len(), "dot shape");
    dot_plain(a, b)
}

pub fn vadd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn vsub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn vscale<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * s).collect()
}

pub fn vneg<S: Scalar>(a: &[S]) -> Vec<S> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn basis_vector<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

pub fn is_zero_vec<S: Scalar>(a: &[S], tol: f64) -> bool {
    a.iter().all(|x| x.is_negligible(tol))
}

/// Index and value of the first non-negligible entry.
pub fn first_nonzero_vec<S: Scalar>(a: &[S], tol: f64) -> Option<(usize, S)> {
    a.iter().position(|x| !x.is_negligible(tol)).map(|i| (i, a[i].clone()))
}

/// Largest entry magnitude, as a float.
pub fn max_abs_vec<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    #[test]
    fn inverse_round_trips_exactly() {
        let a = m(&[&[1, 1, 0], &[1, 3, 1], &[0, 1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert_eq!(a.det(), qi(1));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(a.inverse().is_none());
        assert_eq!(a.det(), qi(0));
    }

    #[test]
    fn leading_minors_detect_indefinite() {
        let a = m(&[&[1, 2], &[2, 1]]);
        assert_eq!(a.leading_minors(), vec![qi(1), qi(-3)]);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let ns = a.nullspace(0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&a.mul_vec(v), 0.0));
        }
    }

    #[test]
    fn float_inverse_needs_pivot_above_tolerance() {
        let a = Matrix::from_rows(vec![vec![1e-14, 0.0], vec![0.0, 1.0]]);
        assert!(a.inverse().is_none());
        let b = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let prod = b.mul(&b.inverse().unwrap());
        assert!(prod.sub(&Matrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn determinant_with_row_swap() {
        let a = Matrix::from_rows(vec![vec![q(0, 1), qi(1)], vec![qi(1), qi(0)]]);
        assert_eq!(a.det(), qi(-1));
    }
}
