//! Structural identities that every valid instance satisfies; each check
//! returns the name of the first failing identity and the offending tuple.

use crate::connection::AffineRiemann;
use crate::error::Result;
use crate::linalg::{self, Matrix};
use crate::phase::phase;
use crate::scalar::Scalar;
use crate::tensor::{Bilinear, OperatorPairs};

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub identity: &'static str,
    pub tuple: Vec<usize>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tuple: Vec<String> = self.tuple.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{} fails at ({})", self.identity, tuple.join(","))
    }
}

fn violation(identity: &'static str, tuple: Vec<usize>) -> Violation {
    Violation { identity, tuple }
}

/// Runs every identity on `ar` and on its phase structure.
pub fn check_all<S: Scalar>(ar: &AffineRiemann<S>) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let tol = ar.tol();
    if let Some(d) = ar.algebra().jacobi_defect() {
        let (a, b, c) = d.triple;
        out.push(violation("jacobi", vec![a, b, c]));
    }
    let br = ar.algebra().bracket();
    if let Some(((a, b, c), _)) = ar.levi_civita().torsion_defect(br, tol) {
        out.push(violation("levi_civita_torsion", vec![a, b, c]));
    }
    if let Some(((a, b, c), _)) = ar.levi_civita().metric_defect(ar.metric(), tol) {
        out.push(violation("levi_civita_metric", vec![a, b, c]));
    }
    let dt = ar.difference();
    if let Some(((a, b, c), _)) = dt.gamma().sub(&dt.gamma().swapped()).first_nonzero(tol) {
        out.push(violation("gamma_symmetry", vec![a, b, c]));
    }
    out.extend(koszul_closed(ar));
    out.extend(nabla_metric(ar));
    out.extend(curvature_identities(ar));
    out.extend(trace_derivative_identities(ar));
    let ps = phase(ar.algebra(), ar.metric())?;
    if let Some((a, b)) = ps.nijenhuis_defect() {
        out.push(violation("nijenhuis", vec![a, b]));
    }
    if let Some((a, b)) = ps.j_parallel_defect() {
        out.push(violation("j_parallel", vec![a, b]));
    }
    if let Some((a, b)) = ps.bracket_law_defect(ar.algebra()) {
        out.push(violation("phase_bracket_law", vec![a, b]));
    }
    if !ps.algebra().is_left_symmetric() {
        out.push(violation("phase_left_symmetric", vec![]));
    }
    Ok(out)
}

/// `dα = 0`.
pub fn koszul_closed<S: Scalar>(ar: &AffineRiemann<S>) -> Option<Violation> {
    let (d_alpha, _) = ar.koszul_closedness();
    d_alpha.first_nonzero(ar.tol()).map(|(a, b, _)| violation("d_alpha", vec![a, b]))
}

/// `∇_u(g)(v, w) = −⟨u•v, w⟩ − ⟨v, u•w⟩ = ⟨γ_u v + γ*_u v, w⟩`.
pub fn nabla_metric<S: Scalar>(ar: &AffineRiemann<S>) -> Option<Violation> {
    let n = ar.dim();
    let g = ar.metric();
    let prod = ar.algebra().product();
    let dt = ar.difference();
    let e = |i| linalg::basis_vector::<S>(n, i);
    for u in 0..n {
        for v in 0..n {
            let sum = linalg::vadd(dt.gamma().at(u, v), dt.gamma_star().at(u, v));
            for w in 0..n {
                let lhs = -(g.inner(prod.at(u, v), &e(w)) + &g.inner(&e(v), prod.at(u, w)));
                if !(lhs - &g.inner(&sum, &e(w))).is_negligible(ar.tol()) {
                    return Some(violation("nabla_metric", vec![u, v, w]));
                }
            }
        }
    }
    None
}

/// Antisymmetry and skew-adjointness of `K`, its expression through `D(γ)`,
/// and `D_v(γ+γ*)(u,w) − D_u(γ+γ*)(v,w) = [γ*_u,γ*_v]w − [γ_u,γ_v]w`.
pub fn curvature_identities<S: Scalar>(ar: &AffineRiemann<S>) -> Vec<Violation> {
    let n = ar.dim();
    let tol = ar.tol();
    let k = ar.curvature();
    let dt = ar.difference();
    let g_ops = dt.gamma().left_operators();
    let gs_ops = dt.gamma_star().left_operators();
    let dg = ar.covariant_derivative(dt.gamma());
    let dsum = ar.covariant_derivative(&dt.gamma().add(dt.gamma_star()));
    let gm = ar.metric().matrix();
    let mut out = Vec::new();
    let pair_check = |name: &'static str, ops: OperatorPairs<S>, out: &mut Vec<Violation>| {
        if let Some(((u, v, r, c), _)) = ops.first_nonzero(tol) {
            out.push(violation(name, vec![u, v, r, c]));
        }
    };
    pair_check("curvature_antisymmetry", OperatorPairs::from_fn(n, |u, v| k.get(u, v).add(k.get(v, u))), &mut out);
    pair_check(
        "curvature_skew_adjoint",
        OperatorPairs::from_fn(n, |u, v| {
            let low = gm.mul(k.get(u, v));
            low.add(&low.transpose())
        }),
        &mut out,
    );
    let column_op = |f: &dyn Fn(usize, usize, usize) -> Vec<S>, u: usize, v: usize| {
        Matrix::from_columns(&(0..n).map(|w| f(u, v, w)).collect::<Vec<_>>())
    };
    let k_expr = |u: usize, v: usize, w: usize| linalg::vsub(dg.at(v, u, w), dg.at(u, v, w));
    pair_check(
        "curvature_from_d_gamma",
        OperatorPairs::from_fn(n, |u, v| {
            column_op(&k_expr, u, v).add(&g_ops[u].commutator(&g_ops[v])).sub(k.get(u, v))
        }),
        &mut out,
    );
    let cu_lhs = |u: usize, v: usize, w: usize| linalg::vsub(dsum.at(v, u, w), dsum.at(u, v, w));
    pair_check(
        "codazzi_sum",
        OperatorPairs::from_fn(n, |u, v| {
            let rhs = gs_ops[u].commutator(&gs_ops[v]).sub(&g_ops[u].commutator(&g_ops[v]));
            column_op(&cu_lhs, u, v).sub(&rhs)
        }),
        &mut out,
    );
    out
}

/// `tr γ = 0 ⇒ tr_g(D_u γ) = 0` and `tr γ* = 0 ⇒ tr_g(D_u γ*) = 0` for every `u`.
pub fn trace_derivative_identities<S: Scalar>(ar: &AffineRiemann<S>) -> Vec<Violation> {
    let tol = ar.tol();
    let dt = ar.difference();
    let mut out = Vec::new();
    let mut check = |name: &'static str, trace: &[S], t: &Bilinear<S>| {
        if linalg::is_zero_vec(trace, tol) {
            for (u, col) in ar.traced_derivative(t).iter().enumerate() {
                if let Some((i, _)) = linalg::first_nonzero_vec(col, tol) {
                    out.push(violation(name, vec![u, i]));
                    return;
                }
            }
        }
    };
    check("traced_derivative_gamma", dt.tr_gamma(), dt.gamma());
    check("traced_derivative_gamma_star", dt.tr_gamma_star(), dt.gamma_star());
    out
}
