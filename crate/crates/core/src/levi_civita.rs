//! Levi-Civita product of a metric Lie algebra, solved from the Koszul formula
//! `2⟨L_u v, w⟩ = ⟨[u,v],w⟩ + ⟨[w,v],u⟩ + ⟨[w,u],v⟩`.

use crate::algebra::Algebra;
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::scalar::Scalar;
use crate::tensor::Bilinear;

#[derive(Clone, Debug, PartialEq)]
pub struct LcProduct<S> {
    product: Bilinear<S>,
}

impl<S: Scalar> LcProduct<S> {
    pub fn product(&self) -> &Bilinear<S> {
        &self.product
    }

    pub fn apply(&self, u: &[S], v: &[S]) -> Vec<S> {
        self.product.apply(u, v)
    }

    /// Matrix of `v ↦ L_{e_i} v`.
    pub fn operator(&self, i: usize) -> Matrix<S> {
        self.product.left_operator(i)
    }

    /// First triple where `L_u v − L_v u ≠ [u,v]`.
    pub fn torsion_defect(&self, bracket: &Bilinear<S>, tol: f64) -> Option<((usize, usize, usize), S)> {
        self.product.sub(&self.product.swapped()).sub(bracket).first_nonzero(tol)
    }

    /// First `(u, v, w)` where `⟨L_u v, w⟩ + ⟨v, L_u w⟩ ≠ 0`.
    pub fn metric_defect(&self, g: &Metric<S>, tol: f64) -> Option<((usize, usize, usize), S)> {
        let n = self.product.dim();
        for u in 0..n {
            let op = self.operator(u);
            // Gram matrix of the form (v, w) ↦ ⟨L_u v, w⟩ + ⟨v, L_u w⟩.
            let low = op.transpose().mul(g.matrix());
            let sym = low.add(&low.transpose());
            if let Some((v, w, x)) = sym.first_nonzero(tol) {
                return Some(((u, v, w), x));
            }
        }
        None
    }
}

/// Solves the Koszul formula on basis triples.
pub fn levi_civita<S: Scalar>(alg: &Algebra<S>, g: &Metric<S>) -> LcProduct<S> {
    levi_civita_of_bracket(alg.bracket(), g)
}

/// Koszul solve from a bracket table alone.
pub fn levi_civita_of_bracket<S: Scalar>(bracket: &Bilinear<S>, g: &Metric<S>) -> LcProduct<S> {
    let n = bracket.dim();
    // lowered[i][j][l] = ⟨[e_i, e_j], e_l⟩
    let lowered = Bilinear::from_fn(n, |i, j| g.matrix().vec_mul(bracket.at(i, j)));
    let half = S::from_ratio(1, 2);
    let product = Bilinear::from_fn(n, |i, j| {
        let rhs: Vec<S> = (0..n)
            .map(|l| lowered.get(i, j, l).clone() + lowered.get(l, j, i) + lowered.get(l, i, j))
            .collect();
        linalg::vscale(&g.raise(&rhs), &half)
    });
    LcProduct { product }
}

/// `Σ_{i,j} g^{ij} T(e_i, e_j)`.
pub fn contract_trace<S: Scalar>(t: &Bilinear<S>, g: &Metric<S>) -> Vec<S> {
    contract_with(t, g.inverse())
}

/// `Σ_{i,j} W_{ij} T(e_i, e_j)` for an arbitrary weight matrix.
pub fn contract_with<S: Scalar>(t: &Bilinear<S>, w: &Matrix<S>) -> Vec<S> {
    let n = t.dim();
    let mut out = vec![S::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let wij = w.get(i, j);
            if wij.is_exact_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let c = t.get(i, j, k);
                if !c.is_exact_zero() {
                    *o += &(wij.clone() * c);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product_from_entries, validate_algebra};
    use crate::scalar::{q, qi, Rational};

    fn n5g3() -> Algebra<Rational> {
        let z = || qi(0);
        validate_algebra(product_from_entries(
            3,
            &[(0, 1, vec![z(), z(), q(1, 2)]), (1, 0, vec![z(), z(), q(-1, 2)])],
        ))
        .unwrap()
    }

    #[test]
    fn abelian_algebra_has_zero_levi_civita_product() {
        let alg = validate_algebra(Bilinear::<Rational>::zeros(3)).unwrap();
        let g = Metric::from_upper_triangle(3, &[qi(2), qi(1), qi(0), qi(3), qi(1), qi(4)]).unwrap();
        assert!(levi_civita(&alg, &g).product().is_zero(0.0));
    }

    #[test]
    fn heisenberg_levi_civita_values() {
        let alg = n5g3();
        let g = Metric::identity(3);
        let lc = levi_civita(&alg, &g);
        let l = lc.product();
        assert_eq!(l.at(0, 1), &[qi(0), qi(0), q(1, 2)]);
        assert_eq!(l.at(0, 2), &[qi(0), q(-1, 2), qi(0)]);
        assert_eq!(l.at(1, 2), &[q(1, 2), qi(0), qi(0)]);
        assert!(lc.torsion_defect(alg.bracket(), 0.0).is_none());
        assert!(lc.metric_defect(&g, 0.0).is_none());
    }

    #[test]
    fn abelian_bracket_forces_zero_product() {
        let alg = validate_algebra(product_from_entries(2, &[(0, 0, vec![qi(0), qi(1)])])).unwrap();
        let g = Metric::from_upper_triangle(2, &[qi(1), qi(0), qi(2)]).unwrap();
        assert!(levi_civita(&alg, &g).product().is_zero(0.0));
    }

    #[test]
    fn contract_trace_of_zero_is_zero() {
        let g = Metric::<Rational>::identity(3);
        assert!(linalg::is_zero_vec(&contract_trace(&Bilinear::zeros(3), &g), 0.0));
    }
}
