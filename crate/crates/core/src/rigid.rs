//! Rigid structures: `D(γ) = 0` and `K(u, v) = [γ_u, γ_v]`, checked on
//! algebras, solved pointwise from holonomy data, and verified on the space of
//! symmetric matrices.

use crate::connection::AffineRiemann;
use crate::error::{Error, Result};
use crate::levi_civita::levi_civita_of_bracket;
use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::poly::{solve, Poly};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{Bilinear, OperatorPairs};
use crate::algebra::Algebra;

#[derive(Clone, Debug, PartialEq)]
pub struct RigidVerdict {
    /// First `(u, v, w, component)` with `D_u(γ)(v, w) ≠ 0`.
    pub d_gamma: Option<Vec<usize>>,
    /// First `(u, v, row, col)` with `K(u, v) ≠ [γ_u, γ_v]`.
    pub curvature: Option<Vec<usize>>,
}

impl RigidVerdict {
    pub fn holds(&self) -> bool {
        self.d_gamma.is_none() && self.curvature.is_none()
    }
}

pub fn rigid_verify<S: Scalar>(ar: &AffineRiemann<S>) -> RigidVerdict {
    let tol = ar.tol();
    let gamma = ar.difference().gamma();
    let d_gamma = ar
        .covariant_derivative(gamma)
        .first_nonzero(tol)
        .map(|((u, v, w, c), _)| vec![u, v, w, c]);
    let residual = commutator_residual(gamma, &ar.curvature());
    let curvature = residual.first_nonzero(tol).map(|((u, v, r, c), _)| vec![u, v, r, c]);
    RigidVerdict { d_gamma, curvature }
}

/// `[γ_u, γ_v] − K(u, v)`.
pub fn commutator_residual<S: Scalar>(gamma: &Bilinear<S>, k: &OperatorPairs<S>) -> OperatorPairs<S> {
    let ops = gamma.left_operators();
    OperatorPairs::from_fn(gamma.dim(), |u, v| ops[u].commutator(&ops[v]).sub(k.get(u, v)))
}

/// The algebra whose product is `L − γ`, where `L` is the Levi-Civita product
/// of `(bracket, g)`. Fails unless `γ` is symmetric, since only then does the
/// product reproduce the bracket.
pub fn affine_from_gamma<S: Scalar>(bracket: &Bilinear<S>, g: &Metric<S>, gamma: &Bilinear<S>) -> Result<AffineRiemann<S>> {
    if let Some(((i, j, _), _)) = gamma.sub(&gamma.swapped()).first_nonzero(0.0) {
        return Err(Error::Shape(format!("γ(e{}, e{}) is not symmetric", i + 1, j + 1)));
    }
    let lc = levi_civita_of_bracket(bracket, g);
    let alg = Algebra::new(lc.product().sub(gamma))?;
    AffineRiemann::new(alg, g.clone())
}

#[derive(Clone, Debug)]
pub struct RigidCandidates {
    /// Basis of symmetric products `γ⁰` equivariant under the holonomy generators.
    pub equivariant_basis: Vec<Bilinear<Rational>>,
    /// Rational points of the equivariant space that also satisfy `K = [γ⁰, γ⁰]`.
    pub solutions: Vec<Bilinear<Rational>>,
}

/// Solves `h·γ⁰(u,v) = γ⁰(h·u, v) + γ⁰(u, h·v)` for every generator, then
/// samples the quadratic curvature condition at rational points; free
/// parameters are fixed at each value of `samples`.
pub fn rigid_candidates(
    hol_gens: &[Matrix<Rational>],
    g: &Metric<Rational>,
    k_point: &OperatorPairs<Rational>,
    samples: &[Rational],
) -> Result<RigidCandidates> {
    let n = g.dim();
    for (i, h) in hol_gens.iter().enumerate() {
        let low = g.matrix().mul(h);
        if !low.add(&low.transpose()).is_zero(0.0) {
            return Err(Error::Shape(format!("holonomy generator {} is not skew-adjoint", i + 1)));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let unknown = |a: usize, b: usize, c: usize| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).expect("ordered pair") * n + c
    };
    let m = pairs.len() * n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for h in hol_gens {
        for &(u, v) in &pairs {
            for r in 0..n {
                let mut row = vec![Rational::zero(); m];
                for c in 0..n {
                    row[unknown(u, v, c)] += h.get(r, c);
                }
                for w in 0..n {
                    row[unknown(w, v, r)] -= h.get(w, u);
                    row[unknown(u, w, r)] -= h.get(w, v);
                }
                rows.push(row);
            }
        }
    }
    let null = if rows.is_empty() {
        (0..m).map(|i| crate::linalg::basis_vector(m, i)).collect()
    } else {
        Matrix::from_rows(rows).nullspace(0.0)
    };
    let to_bilinear = |x: &[Rational]| Bilinear::from_fn(n, |a, b| (0..n).map(|c| x[unknown(a, b, c)].clone()).collect());
    let equivariant_basis: Vec<Bilinear<Rational>> = null.iter().map(|v| to_bilinear(v)).collect();

    let d = equivariant_basis.len();
    // Operator entries of γ_u = Σ t_i B_i(u) as linear polynomials in t.
    let op_polys: Vec<Vec<Poly>> = (0..n)
        .map(|u| {
            (0..n * n)
                .map(|rc| {
                    let (r, c) = (rc / n, rc % n);
                    Poly::linear(&equivariant_basis.iter().map(|b| b.get(u, c, r).clone()).collect::<Vec<_>>())
                })
                .collect()
        })
        .collect();
    let mut eqs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            for r in 0..n {
                for c in 0..n {
                    let mut p = Poly::constant(d, -k_point.get(u, v).get(r, c).clone());
                    for w in 0..n {
                        p = p.add(&op_polys[u][r * n + w].mul(&op_polys[v][w * n + c]));
                        p = p.sub(&op_polys[v][r * n + w].mul(&op_polys[u][w * n + c]));
                    }
                    if !p.is_zero() {
                        eqs.push(p);
                    }
                }
            }
        }
    }
    let points = if d == 0 {
        if eqs.is_empty() { vec![vec![]] } else { vec![] }
    } else if eqs.is_empty() {
        vec![vec![samples.first().cloned().unwrap_or_else(Rational::zero); d]]
    } else {
        solve(&eqs, samples)
    };
    let solutions = points
        .iter()
        .map(|t| {
            equivariant_basis
                .iter()
                .zip(t)
                .fold(Bilinear::zeros(n), |acc, (b, ti)| acc.add(&b.scale(ti)))
        })
        .collect();
    Ok(RigidCandidates { equivariant_basis, solutions })
}

/// Pointwise identities on symmetric `n × n` matrices with `⟨A, B⟩ = tr(AB)`,
/// `γ_A B = AB + BA` and `K(A, B)C = [[A, B], C]`. Returns the first failing
/// identity with the basis tuple.
pub fn symmetric_matrix_identities(n: usize) -> Option<(&'static str, Vec<usize>)> {
    let basis = symmetric_basis(n);
    let m = basis.len();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if let Some(name) = symmetric_triple_defect(&basis[a], &basis[b], &basis[c]) {
                    return Some((name, vec![a, b, c]));
                }
                for e in 0..m {
                    if !derivation_holds(&basis[a], &basis[b], &basis[c], &basis[e]) {
                        return Some(("derivation", vec![a, b, c, e]));
                    }
                }
            }
        }
    }
    None
}

/// `E_ii` followed by `E_ij + E_ji` for `i < j`.
pub fn symmetric_basis(n: usize) -> Vec<Matrix<Rational>> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(Matrix::from_fn(n, n, |r, c| Rational::from_i64((r == i && c == i) as i64)));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(Matrix::from_fn(n, n, |r, c| Rational::from_i64(((r, c) == (i, j) || (r, c) == (j, i)) as i64)));
        }
    }
    out
}

fn jordan(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Matrix<Rational> {
    a.mul(b).add(&b.mul(a))
}

fn curvature(a: &Matrix<Rational>, b: &Matrix<Rational>, c: &Matrix<Rational>) -> Matrix<Rational> {
    a.commutator(b).commutator(c)
}

/// `K(A,B)C = [γ_A, γ_B]C` and `⟨γ_A B, C⟩ = ⟨B, γ_A C⟩`.
pub fn symmetric_triple_defect(a: &Matrix<Rational>, b: &Matrix<Rational>, c: &Matrix<Rational>) -> Option<&'static str> {
    let commutator = jordan(a, &jordan(b, c)).sub(&jordan(b, &jordan(a, c)));
    if curvature(a, b, c) != commutator {
        return Some("curvature");
    }
    if jordan(a, b).mul(c).trace() != b.mul(&jordan(a, c)).trace() {
        return Some("self_adjoint");
    }
    None
}

/// `K(A,B)(γ_C E) = γ_{K(A,B)C} E + γ_C (K(A,B)E)`.
pub fn derivation_holds(a: &Matrix<Rational>, b: &Matrix<Rational>, c: &Matrix<Rational>, e: &Matrix<Rational>) -> bool {
    let lhs = curvature(a, b, &jordan(c, e));
    let rhs = jordan(&curvature(a, b, c), e).add(&jordan(c, &curvature(a, b, e)));
    lhs == rhs
}
