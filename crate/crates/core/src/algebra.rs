//! Finite-dimensional algebras given by structure constants, with the
//! left-symmetry, Novikov and Jacobi checks performed once at validation.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{Scalar, DEFAULT_TOL};
use crate::tensor::Bilinear;

/// First basis triple violating an identity, with the size of the violation.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleDefect {
    pub triple: (usize, usize, usize),
    pub residual: f64,
}

/// A validated algebra. Immutable; the bracket and identity checks are cached.
#[derive(Clone, Debug)]
pub struct Algebra<S> {
    product: Bilinear<S>,
    bracket: Bilinear<S>,
    left_mult: Vec<Matrix<S>>,
    left_symmetry_defect: Option<TripleDefect>,
    novikov_defect: Option<TripleDefect>,
    jacobi_defect: Option<TripleDefect>,
    tol: f64,
}

/// Validates raw structure constants with the default float tolerance.
pub fn validate_algebra<S: Scalar>(product: Bilinear<S>) -> Result<Algebra<S>> {
    Algebra::with_tolerance(product, DEFAULT_TOL)
}

impl<S: Scalar> Algebra<S> {
    pub fn new(product: Bilinear<S>) -> Result<Self> {
        validate_algebra(product)
    }

    pub fn with_tolerance(product: Bilinear<S>, tol: f64) -> Result<Self> {
        let n = product.dim();
        if n == 0 {
            return Err(Error::Shape("algebra dimension must be positive".into()));
        }
        if let Some(p) = product.entries().iter().position(|x| !x.is_finite()) {
            let (i, j, k) = (p / (n * n), (p / n) % n, p % n);
            return Err(Error::NonFinite { location: format!("C[{}][{}][{}]", i + 1, j + 1, k + 1) });
        }
        let bracket = product.sub(&product.swapped());
        let left_mult = product.left_operators();
        let mut alg = Algebra {
            product,
            bracket,
            left_mult,
            left_symmetry_defect: None,
            novikov_defect: None,
            jacobi_defect: None,
            tol,
        };
        alg.left_symmetry_defect = alg.find_left_symmetry_defect();
        alg.novikov_defect = alg.find_novikov_defect();
        alg.jacobi_defect = alg.find_jacobi_defect();
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn product(&self) -> &Bilinear<S> {
        &self.product
    }

    pub fn bracket(&self) -> &Bilinear<S> {
        &self.bracket
    }

    /// Matrix of `v ↦ e_i • v`.
    pub fn left_mult(&self, i: usize) -> &Matrix<S> {
        &self.left_mult[i]
    }

    pub fn mul(&self, u: &[S], v: &[S]) -> Vec<S> {
        self.product.apply(u, v)
    }

    pub fn commutator(&self, u: &[S], v: &[S]) -> Vec<S> {
        self.bracket.apply(u, v)
    }

    pub fn is_left_symmetric(&self) -> bool {
        self.left_symmetry_defect.is_none()
    }

    pub fn is_novikov(&self) -> bool {
        self.is_left_symmetric() && self.novikov_defect.is_none()
    }

    pub fn left_symmetry_defect(&self) -> Option<&TripleDefect> {
        self.left_symmetry_defect.as_ref()
    }

    pub fn jacobi_defect(&self) -> Option<&TripleDefect> {
        self.jacobi_defect.as_ref()
    }

    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_defect.is_none()
    }

    pub fn require_left_symmetric(&self) -> Result<()> {
        match &self.left_symmetry_defect {
            None => Ok(()),
            Some(d) => Err(Error::NotLeftSymmetric { triple: d.triple, residual: d.residual }),
        }
    }

    /// `(e_a • e_b) • e_c − e_a • (e_b • e_c)`.
    pub fn associator(&self, a: usize, b: usize, c: usize) -> Vec<S> {
        let ab = self.product.at(a, b);
        let left = self.product.apply_right_basis(ab, c);
        let right = self.left_mult[a].mul_vec(self.product.at(b, c));
        linalg::vsub(&left, &right)
    }

    /// The algebra in the basis `f_a = Σ_i P[i][a] e_i`.
    pub fn change_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let p_inv = p.inverse().ok_or(Error::SingularMetric)?;
        Self::with_tolerance(self.product.change_basis(p, &p_inv), self.tol)
    }

    fn find_left_symmetry_defect(&self) -> Option<TripleDefect> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = linalg::vsub(&self.associator(a, b, c), &self.associator(b, a, c));
                    if !linalg::is_zero_vec(&d, self.tol) {
                        return Some(TripleDefect { triple: (a, b, c), residual: linalg::max_abs_vec(&d) });
                    }
                }
            }
        }
        None
    }

    fn find_novikov_defect(&self) -> Option<TripleDefect> {
        let n = self.dim();
        let right: Vec<Matrix<S>> = (0..n).map(|j| self.product.right_operator(j)).collect();
        for b in 0..n {
            for c in b + 1..n {
                let comm = right[b].commutator(&right[c]);
                if let Some((_, col, _)) = comm.first_nonzero(self.tol) {
                    return Some(TripleDefect { triple: (col, b, c), residual: comm.max_abs() });
                }
            }
        }
        None
    }

    fn find_jacobi_defect(&self) -> Option<TripleDefect> {
        let n = self.dim();
        let br = &self.bracket;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let t1 = br.apply_right_basis(br.at(a, b), c);
                    let t2 = br.apply_right_basis(br.at(b, c), a);
                    let t3 = br.apply_right_basis(br.at(c, a), b);
                    let sum = linalg::vadd(&linalg::vadd(&t1, &t2), &t3);
                    if !linalg::is_zero_vec(&sum, self.tol) {
                        return Some(TripleDefect { triple: (a, b, c), residual: linalg::max_abs_vec(&sum) });
                    }
                }
            }
        }
        None
    }
}

/// Builds structure constants from `(i, j, coefficients)` triples with 0-based indices.
pub fn product_from_entries<S: Scalar>(dim: usize, entries: &[(usize, usize, Vec<S>)]) -> Bilinear<S> {
    let mut b = Bilinear::zeros(dim);
    for (i, j, coeffs) in entries {
        for (k, c) in coeffs.iter().enumerate() {
            b.set(*i, *j, k, c.clone());
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};

    fn heisenberg_novikov() -> Algebra<Rational> {
        let z = qi(0);
        let p = product_from_entries(
            3,
            &[(0, 1, vec![z.clone(), z.clone(), q(1, 2)]), (1, 0, vec![z.clone(), z, q(-1, 2)])],
        );
        validate_algebra(p).unwrap()
    }

    #[test]
    fn zero_product_is_novikov() {
        let alg = validate_algebra(Bilinear::<Rational>::zeros(3)).unwrap();
        assert!(alg.is_left_symmetric());
        assert!(alg.is_novikov());
        assert!(alg.bracket().is_zero(0.0));
    }

    #[test]
    fn half_products_give_heisenberg_bracket() {
        let alg = heisenberg_novikov();
        assert!(alg.is_left_symmetric());
        assert_eq!(alg.bracket().at(0, 1), &[qi(0), qi(0), qi(1)]);
        assert!(alg.satisfies_jacobi());
    }

    #[test]
    fn swapped_squares_are_not_left_symmetric() {
        let p = product_from_entries(2, &[(0, 0, vec![qi(0), qi(1)]), (1, 1, vec![qi(1), qi(0)])]);
        let alg = validate_algebra(p).unwrap();
        assert!(!alg.is_left_symmetric());
        let err = alg.require_left_symmetric().unwrap_err();
        assert!(matches!(err, Error::NotLeftSymmetric { .. }));
    }

    #[test]
    fn nan_is_rejected() {
        let mut p = Bilinear::<f64>::zeros(2);
        p.set(1, 0, 1, f64::NAN);
        assert!(matches!(validate_algebra(p), Err(Error::NonFinite { .. })));
    }
}
