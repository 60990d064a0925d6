//! The phase algebra `Φ(g) = g × g` with `(a,b)⋆(c,d) = (a•c, a•d)`, complex
//! structure `J(a,b) = (−b,a)` and the doubled metric.
//!
//! Basis order is `f_i = (e_i, 0)` (horizontal) followed by `f_{n+i} = (0, e_i)`
//! (vertical).

use crate::algebra::Algebra;
use crate::error::Result;
use crate::forms::Form;
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::scalar::Scalar;
use crate::tensor::Bilinear;

#[derive(Clone, Debug)]
pub struct PhaseStructure<S> {
    base_dim: usize,
    algebra: Algebra<S>,
    metric: Metric<S>,
    j: Matrix<S>,
    omega: Form<S>,
}

/// Builds `Φ(g)`; fails with `NotLeftSymmetric` on invalid input.
pub fn phase<S: Scalar>(alg: &Algebra<S>, g: &Metric<S>) -> Result<PhaseStructure<S>> {
    alg.require_left_symmetric()?;
    let n = alg.dim();
    let base = alg.product();
    let mut star = Bilinear::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = base.get(i, j, k);
                if c.is_exact_zero() {
                    continue;
                }
                star.set(i, j, k, c.clone());
                star.set(i, n + j, n + k, c.clone());
            }
        }
    }
    let algebra = Algebra::with_tolerance(star, alg.tolerance())?;
    let metric = g.doubled();
    let j = complex_structure(n);
    let omega = fundamental_form(&j, &metric);
    Ok(PhaseStructure { base_dim: n, algebra, metric, j, omega })
}

/// `J(a, b) = (−b, a)` on `g × g`.
pub fn complex_structure<S: Scalar>(n: usize) -> Matrix<S> {
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r == c + n {
            S::one()
        } else if c == r + n {
            -S::one()
        } else {
            S::zero()
        }
    })
}

/// `ω(x, y) = g(Jx, y)`.
pub fn fundamental_form<S: Scalar>(j: &Matrix<S>, g: &Metric<S>) -> Form<S> {
    Form::from_matrix(&j.transpose().mul(g.matrix()))
}

impl<S: Scalar> PhaseStructure<S> {
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.base_dim
    }

    pub fn algebra(&self) -> &Algebra<S> {
        &self.algebra
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn complex_structure(&self) -> &Matrix<S> {
        &self.j
    }

    pub fn omega(&self) -> &Form<S> {
        &self.omega
    }

    pub fn into_parts(self) -> (Algebra<S>, Metric<S>) {
        (self.algebra, self.metric)
    }

    /// Horizontal lift of a base vector.
    pub fn horizontal(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        out.extend(std::iter::repeat_with(S::zero).take(self.base_dim));
        out
    }

    /// Vertical lift of a base vector.
    pub fn vertical(&self, v: &[S]) -> Vec<S> {
        let mut out: Vec<S> = std::iter::repeat_with(S::zero).take(self.base_dim).collect();
        out.extend_from_slice(v);
        out
    }

    /// First basis pair where the bracket differs from `([a,c], a•d − c•b)`.
    pub fn bracket_law_defect(&self, base: &Algebra<S>) -> Option<(usize, usize)> {
        let n = self.base_dim;
        let tol = self.algebra.tolerance();
        let split = |x: usize| {
            let e = linalg::basis_vector::<S>(n, x % n);
            let z = vec![S::zero(); n];
            if x < n {
                (e, z)
            } else {
                (z, e)
            }
        };
        for x in 0..2 * n {
            for y in 0..2 * n {
                let (a, b) = split(x);
                let (c, d) = split(y);
                let mut expected = base.commutator(&a, &c);
                expected.extend(linalg::vsub(&base.mul(&a, &d), &base.mul(&c, &b)));
                if !linalg::is_zero_vec(&linalg::vsub(self.algebra.bracket().at(x, y), &expected), tol) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// First pair where `N_J(x,y) = [Jx,Jy] − J[Jx,y] − J[x,Jy] − [x,y]` is nonzero.
    pub fn nijenhuis_defect(&self) -> Option<(usize, usize)> {
        let m = self.dim();
        let tol = self.algebra.tolerance();
        let br = self.algebra.bracket();
        for x in 0..m {
            for y in 0..m {
                let jx = self.j.column(x);
                let jy = self.j.column(y);
                let ex = linalg::basis_vector::<S>(m, x);
                let ey = linalg::basis_vector::<S>(m, y);
                let t1 = br.apply(&jx, &jy);
                let t2 = self.j.mul_vec(&br.apply(&jx, &ey));
                let t3 = self.j.mul_vec(&br.apply(&ex, &jy));
                let t4 = br.at(x, y);
                let total = linalg::vsub(&linalg::vsub(&linalg::vsub(&t1, &t2), &t3), t4);
                if !linalg::is_zero_vec(&total, tol) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// First pair where `x ⋆ Jy ≠ J(x ⋆ y)`.
    pub fn j_parallel_defect(&self) -> Option<(usize, usize)> {
        let m = self.dim();
        let tol = self.algebra.tolerance();
        let star = self.algebra.product();
        for x in 0..m {
            let lx = star.left_operator(x);
            let d = lx.mul(&self.j).sub(&self.j.mul(&lx));
            if let Some((_, y, _)) = d.first_nonzero(tol) {
                return Some((x, y));
            }
        }
        None
    }

    /// `J² = −I`, `g(Jx,Jy) = g(x,y)` and `ω` antisymmetric and `J`-invariant.
    pub fn hermitian_defect(&self) -> Option<&'static str> {
        let m = self.dim();
        let tol = self.algebra.tolerance();
        let id = Matrix::<S>::identity(m);
        if !self.j.mul(&self.j).add(&id).is_zero(tol) {
            return Some("J^2 != -1");
        }
        let g = self.metric.matrix();
        if !self.j.transpose().mul(g).mul(&self.j).sub(g).is_zero(tol) {
            return Some("J is not orthogonal");
        }
        if self.omega.antisymmetry_defect(tol).is_some() {
            return Some("omega is not antisymmetric");
        }
        if !self.omega.pullback(&self.j).sub(&self.omega).is_zero(tol) {
            return Some("omega is not J-invariant");
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product_from_entries, validate_algebra};
    use crate::scalar::{q, qi, Rational};

    #[test]
    fn abelian_line_doubles_to_the_standard_plane() {
        let alg = validate_algebra(Bilinear::<Rational>::zeros(1)).unwrap();
        let ps = phase(&alg, &Metric::identity(1)).unwrap();
        assert!(ps.algebra().bracket().is_zero(0.0));
        assert_eq!(ps.complex_structure().get(1, 0), &qi(1));
        assert_eq!(ps.omega().get(&[0, 1]), &qi(1));
        assert_eq!(ps.omega().get(&[1, 0]), &qi(-1));
    }

    #[test]
    fn heisenberg_phase_bracket() {
        let z = || qi(0);
        let alg = validate_algebra(product_from_entries(
            3,
            &[(0, 1, vec![z(), z(), q(1, 2)]), (1, 0, vec![z(), z(), q(-1, 2)])],
        ))
        .unwrap();
        let ps = phase(&alg, &Metric::identity(3)).unwrap();
        let br = ps.algebra().bracket();
        assert_eq!(br.at(0, 1), &[z(), z(), qi(1), z(), z(), z()]);
        assert_eq!(br.at(0, 4), &[z(), z(), z(), z(), z(), q(1, 2)]);
        assert_eq!(br.at(1, 3), &[z(), z(), z(), z(), z(), q(-1, 2)]);
        assert!(ps.algebra().is_left_symmetric());
        assert!(ps.bracket_law_defect(&alg).is_none());
        assert!(ps.nijenhuis_defect().is_none());
        assert!(ps.j_parallel_defect().is_none());
        assert!(ps.hermitian_defect().is_none());
    }
}
