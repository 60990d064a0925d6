//! Dense left-invariant differential forms on a Lie algebra: the
//! Chevalley–Eilenberg differential, pullbacks, and the metric codifferential.

use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::Scalar;
use crate::tensor::Bilinear;

/// A `p`-form stored on all `n^p` basis tuples (antisymmetry is not enforced).
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    data: Vec<S>,
}

impl<S: Scalar> Form<S> {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        Form { dim, degree, data: vec![S::zero(); dim.pow(degree as u32)] }
    }

    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> S) -> Self {
        let size = dim.pow(degree as u32);
        let mut idx = vec![0; degree];
        let data = (0..size)
            .map(|flat| {
                decode(flat, dim, &mut idx);
                f(&idx)
            })
            .collect();
        Form { dim, degree, data }
    }

    pub fn from_covector(eta: &[S]) -> Self {
        Form { dim: eta.len(), degree: 1, data: eta.to_vec() }
    }

    pub fn from_matrix(m: &Matrix<S>) -> Self {
        Form { dim: m.rows(), degree: 2, data: m.entries().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, idx: &[usize]) -> &S {
        &self.data[encode(idx, self.dim)]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    /// First basis tuple (lexicographic) with a non-negligible value.
    pub fn first_nonzero(&self, tol: f64) -> Option<(Vec<usize>, S)> {
        let p = self.data.iter().position(|x| !x.is_negligible(tol))?;
        let mut idx = vec![0; self.degree];
        decode(p, self.dim, &mut idx);
        Some((idx, self.data[p].clone()))
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs_vec(&self.data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Form {
            dim: self.dim,
            degree: self.degree,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        Form { dim: self.dim, degree: self.degree, data: self.data.iter().map(|a| a.clone() * s).collect() }
    }

    /// First tuple where swapping two adjacent slots fails to flip the sign.
    pub fn antisymmetry_defect(&self, tol: f64) -> Option<Vec<usize>> {
        let mut idx = vec![0; self.degree];
        for flat in 0..self.data.len() {
            decode(flat, self.dim, &mut idx);
            for s in 0..self.degree.saturating_sub(1) {
                let mut sw = idx.clone();
                sw.swap(s, s + 1);
                if !(self.data[flat].clone() + self.get(&sw)).is_negligible(tol) {
                    return Some(idx.clone());
                }
            }
        }
        None
    }

    /// Chevalley–Eilenberg differential
    /// `dη(x₀..x_p) = Σ_{i<j} (−1)^{i+j} η([x_i,x_j], x₀..x̂_i..x̂_j..x_p)`.
    pub fn d(&self, bracket: &Bilinear<S>) -> Self {
        let n = self.dim;
        let p = self.degree;
        Form::from_fn(n, p + 1, |x| {
            let mut acc = S::zero();
            let mut rest = Vec::with_capacity(p);
            for i in 0..=p {
                for j in i + 1..=p {
                    let br = bracket.at(x[i], x[j]);
                    rest.clear();
                    rest.push(0);
                    rest.extend(x.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v));
                    let mut term = S::zero();
                    for (m, c) in br.iter().enumerate() {
                        if c.is_exact_zero() {
                            continue;
                        }
                        rest[0] = m;
                        let val = self.get(&rest);
                        if !val.is_exact_zero() {
                            term += &(c.clone() * val);
                        }
                    }
                    if (i + j) % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
            }
            acc
        })
    }

    /// `(A*η)(x₁..x_p) = η(Ax₁, .., Ax_p)` for the slots flagged in `slots`.
    pub fn pullback_slots(&self, a: &Matrix<S>, slots: &[bool]) -> Self {
        assert_eq!(slots.len(), self.degree, "slot mask length");
        let n = self.dim;
        let mut current = self.clone();
        for (s, &apply) in slots.iter().enumerate() {
            if !apply {
                continue;
            }
            let prev = current;
            current = Form::from_fn(n, self.degree, |idx| {
                let mut acc = S::zero();
                let mut probe = idx.to_vec();
                for m in 0..n {
                    let c = a.get(m, idx[s]);
                    if c.is_exact_zero() {
                        continue;
                    }
                    probe[s] = m;
                    acc += &(c.clone() * prev.get(&probe));
                }
                acc
            });
        }
        current
    }

    /// `η(Ax₁, .., Ax_p)`.
    pub fn pullback(&self, a: &Matrix<S>) -> Self {
        self.pullback_slots(a, &vec![true; self.degree])
    }

    /// Action on forms of a complex structure: `Jη(x₁..x_p) = (−1)^p η(Jx₁, .., Jx_p)`.
    pub fn apply_complex_structure(&self, j: &Matrix<S>) -> Self {
        let pulled = self.pullback(j);
        if self.degree % 2 == 1 {
            pulled.scale(&-S::one())
        } else {
            pulled
        }
    }

    /// Codifferential of a left-invariant form,
    /// `d*η(x₁..x_{p−1}) = −Σ g^{ij} (∇_{e_i}η)(e_j, x₁..x_{p−1})`, where
    /// `(∇_x η)(y₁..y_p) = −Σ_k η(y₁..L_x y_k..y_p)` and `L` is the Levi-Civita product.
    pub fn codifferential(&self, lc: &Bilinear<S>, g: &Metric<S>) -> Self {
        let n = self.dim;
        let p = self.degree;
        assert!(p >= 1, "codifferential of a 0-form");
        let ginv = g.inverse();
        let tr_l = crate::levi_civita::contract_trace(lc, g);
        // raised[i][rest] = Σ_j g^{ij} η(e_j, rest)
        let raised = Form::from_fn(n, p, |idx| {
            let mut acc = S::zero();
            let mut probe = idx.to_vec();
            for jj in 0..n {
                let w = ginv.get(idx[0], jj);
                if w.is_exact_zero() {
                    continue;
                }
                probe[0] = jj;
                acc += &(w.clone() * self.get(&probe));
            }
            acc
        });
        Form::from_fn(n, p - 1, |rest| {
            let mut acc = S::zero();
            let mut probe = Vec::with_capacity(p);
            probe.push(0);
            probe.extend_from_slice(rest);
            for (a, c) in tr_l.iter().enumerate() {
                if c.is_exact_zero() {
                    continue;
                }
                probe[0] = a;
                acc += &(c.clone() * self.get(&probe));
            }
            for k in 0..rest.len() {
                for i in 0..n {
                    let lx = lc.at(i, rest[k]);
                    for (m, c) in lx.iter().enumerate() {
                        if c.is_exact_zero() {
                            continue;
                        }
                        probe[0] = i;
                        probe[1..].copy_from_slice(rest);
                        probe[k + 1] = m;
                        acc += &(c.clone() * raised.get(&probe));
                    }
                }
            }
            acc
        })
    }
}

fn encode(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn decode(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}
