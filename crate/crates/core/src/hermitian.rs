//! Hermitian objects computed directly on a phase algebra, and the block
//! closed forms they are compared against.
//!
//! Direct computations never use the block structure of `Φ(g)`; the closed
//! forms are built from the base structure and lifted with the horizontal /
//! vertical basis convention.

use crate::connection::{AffineRiemann, DifferenceTensor};
use crate::forms::Form;
use crate::levi_civita::{levi_civita, LcProduct};
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::phase::PhaseStructure;
use crate::scalar::Scalar;
use crate::tensor::{Bilinear, OperatorPairs};

/// `dω` by the Chevalley–Eilenberg differential.
pub fn d_omega<S: Scalar>(ps: &PhaseStructure<S>) -> Form<S> {
    ps.omega().d(ps.algebra().bracket())
}

/// Lee form `θ = J d*ω`, i.e. `θ(x) = −d*ω(Jx)`, from the generic codifferential.
pub fn lee_form_direct<S: Scalar>(ps: &PhaseStructure<S>) -> Vec<S> {
    let lc = levi_civita(ps.algebra(), ps.metric());
    lee_form_with(ps, &lc)
}

pub(crate) fn lee_form_with<S: Scalar>(ps: &PhaseStructure<S>, lc: &LcProduct<S>) -> Vec<S> {
    let dstar = ps.omega().codifferential(lc.product(), ps.metric());
    linalg::vneg(&ps.complex_structure().vec_mul(dstar.entries()))
}

/// `dJdω` and whether it vanishes identically.
pub fn pluriclosed_direct<S: Scalar>(ps: &PhaseStructure<S>) -> (Form<S>, bool) {
    let br = ps.algebra().bracket();
    let jd = d_omega(ps).apply_complex_structure(ps.complex_structure());
    let form = jd.d(br);
    let holds = form.is_zero(ps.algebra().tolerance());
    (form, holds)
}

/// Residual of the reduced pluriclosed criterion, `K(u,v) − (γ*_u γ_v − γ*_v γ_u)`.
pub fn pluriclosed_residual<S: Scalar>(ar: &AffineRiemann<S>) -> OperatorPairs<S> {
    let n = ar.dim();
    let dt = ar.difference();
    let g_ops = dt.gamma().left_operators();
    let gs_ops = dt.gamma_star().left_operators();
    let k = ar.curvature();
    OperatorPairs::from_fn(n, |u, v| {
        let rhs = gs_ops[u].mul(&g_ops[v]).sub(&gs_ops[v].mul(&g_ops[u]));
        k.get(u, v).sub(&rhs)
    })
}

/// First 4-tuple where the direct `dJdω` disagrees with its block description:
/// `2⟨P(x,y)z, w⟩` on `(h,h,v,v)` and zero on tuples with other horizontal counts.
pub fn pluriclosed_block_defect<S: Scalar>(
    ar: &AffineRiemann<S>,
    form: &Form<S>,
) -> Option<Vec<usize>> {
    let n = ar.dim();
    let tol = ar.tol();
    let residual = pluriclosed_residual(ar);
    let two = S::from_i64(2);
    for (flat, value) in form.entries().iter().enumerate() {
        let idx = [flat / (8 * n * n * n), (flat / (4 * n * n)) % (2 * n), (flat / (2 * n)) % (2 * n), flat % (2 * n)];
        let horizontal = idx.iter().filter(|&&i| i < n).count();
        let expected = if idx[0] < n && idx[1] < n && idx[2] >= n && idx[3] >= n {
            let pz = residual.get(idx[0], idx[1]).column(idx[2] - n);
            let w = linalg::basis_vector(n, idx[3] - n);
            ar.metric().inner(&pz, &w) * &two
        } else if horizontal != 2 {
            S::zero()
        } else {
            continue;
        };
        if !(value.clone() - &expected).is_negligible(tol) {
            return Some(idx.to_vec());
        }
    }
    None
}

/// First triple where `dω` disagrees with its blocks: `⟨γ*_x y − γ*_y x, z⟩` on
/// `(h,h,v)` and zero on `(h,h,h)`, `(v,v,v)`, `(h,v,v)`.
pub fn d_omega_block_defect<S: Scalar>(ar: &AffineRiemann<S>, d_omega: &Form<S>) -> Option<Vec<usize>> {
    let n = ar.dim();
    let tol = ar.tol();
    let gs = ar.difference().gamma_star();
    for x in 0..2 * n {
        for y in 0..2 * n {
            for z in 0..2 * n {
                let value = d_omega.get(&[x, y, z]);
                let expected = match (x < n, y < n, z < n) {
                    (true, true, false) => {
                        let diff = linalg::vsub(gs.at(x, y), gs.at(y, x));
                        ar.metric().inner(&diff, &linalg::basis_vector(n, z - n))
                    }
                    (true, true, true) | (false, false, false) | (true, false, false) => S::zero(),
                    _ => continue,
                };
                if !(value.clone() - &expected).is_negligible(tol) {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

/// Canonical Hermitian connections of a phase structure.
#[derive(Clone, Debug)]
pub struct CanonicalConnections<S> {
    pub levi_civita: Bilinear<S>,
    pub bismut: Bilinear<S>,
    pub chern: Bilinear<S>,
    pub bismut_curvature: OperatorPairs<S>,
    pub chern_curvature: OperatorPairs<S>,
    pub bismut_ricci: Matrix<S>,
    pub chern_ricci: Matrix<S>,
}

/// Bismut and Chern products from
/// `g(∇^B_x y, z) = g(L_x y, z) + ½ dω(Jx, Jy, Jz)` and
/// `g(∇^C_x y, z) = g(L_x y, z) − ½ dω(Jx, y, z)`, with curvatures and Ricci forms.
pub fn canonical_connections_direct<S: Scalar>(ps: &PhaseStructure<S>) -> CanonicalConnections<S> {
    let lc = levi_civita(ps.algebra(), ps.metric());
    let dw = d_omega(ps);
    let j = ps.complex_structure();
    let bismut_form = dw.pullback(j);
    let chern_form = dw.pullback_slots(j, &[true, false, false]);
    let half = S::from_ratio(1, 2);
    let m = ps.dim();
    let correct = |form: &Form<S>, sign: &S| {
        Bilinear::from_fn(m, |x, y| {
            let low: Vec<S> = (0..m).map(|z| form.get(&[x, y, z]).clone() * sign).collect();
            linalg::vadd(lc.product().at(x, y), &ps.metric().raise(&low))
        })
    };
    let bismut = correct(&bismut_form, &half);
    let chern = correct(&chern_form, &-half.clone());
    let br = ps.algebra().bracket();
    let bismut_curvature = connection_curvature(&bismut, br);
    let chern_curvature = connection_curvature(&chern, br);
    let bismut_ricci = ricci_form_direct(&bismut, br, ps.metric(), j);
    let chern_ricci = ricci_form_direct(&chern, br, ps.metric(), j);
    CanonicalConnections {
        levi_civita: lc.product().clone(),
        bismut,
        chern,
        bismut_curvature,
        chern_curvature,
        bismut_ricci,
        chern_ricci,
    }
}

impl<S: Scalar> CanonicalConnections<S> {
    /// Names the first connection that fails to preserve `J` or the metric.
    pub fn hermitian_defect(&self, ps: &PhaseStructure<S>) -> Option<&'static str> {
        let tol = ps.algebra().tolerance();
        let j = ps.complex_structure();
        let g = ps.metric().matrix();
        for (name, tau) in [("bismut", &self.bismut), ("chern", &self.chern)] {
            for x in 0..tau.dim() {
                let op = tau.left_operator(x);
                if !op.mul(j).sub(&j.mul(&op)).is_zero(tol) {
                    return Some(name);
                }
                let low = op.transpose().mul(g);
                if !low.add(&low.transpose()).is_zero(tol) {
                    return Some(name);
                }
            }
        }
        None
    }

    /// First `(x, y, z)` where `g(T^B(x,y), z)` fails total antisymmetry.
    pub fn bismut_torsion_defect(&self, ps: &PhaseStructure<S>) -> Option<(usize, usize, usize)> {
        let tol = ps.algebra().tolerance();
        let t = torsion(&self.bismut, ps.algebra().bracket());
        let m = ps.dim();
        let low = |x: usize, y: usize, z: usize| ps.metric().inner(t.at(x, y), &linalg::basis_vector(m, z));
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if !(low(x, y, z) + &low(x, z, y)).is_negligible(tol) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// First `(x, y)` where `T^C(Jx, Jy) ≠ −T^C(x, y)`.
    pub fn chern_torsion_defect(&self, ps: &PhaseStructure<S>) -> Option<(usize, usize)> {
        let tol = ps.algebra().tolerance();
        let t = torsion(&self.chern, ps.algebra().bracket());
        let j = ps.complex_structure();
        let m = ps.dim();
        for x in 0..m {
            for y in 0..m {
                let tj = t.apply(&j.column(x), &j.column(y));
                if !linalg::is_zero_vec(&linalg::vadd(&tj, t.at(x, y)), tol) {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// `T(x, y) = τ_x y − τ_y x − [x, y]`.
pub fn torsion<S: Scalar>(tau: &Bilinear<S>, bracket: &Bilinear<S>) -> Bilinear<S> {
    tau.sub(&tau.swapped()).sub(bracket)
}

/// `R(x, y) = τ_{[x,y]} − [τ_x, τ_y]`.
pub fn connection_curvature<S: Scalar>(tau: &Bilinear<S>, bracket: &Bilinear<S>) -> OperatorPairs<S> {
    let ops = tau.left_operators();
    OperatorPairs::from_fn(tau.dim(), |x, y| {
        tau.left_operator_of(bracket.at(x, y)).sub(&ops[x].commutator(&ops[y]))
    })
}

/// Ricci form `ρ(x, y) = ½ Σ g^{ij} g(R(x,y) e_i, J e_j)` of a connection,
/// without materializing the curvature.
pub fn ricci_form_direct<S: Scalar>(
    tau: &Bilinear<S>,
    bracket: &Bilinear<S>,
    g: &Metric<S>,
    j: &Matrix<S>,
) -> Matrix<S> {
    let m = tau.dim();
    // ρ(x,y) = ½ ⟨R(x,y), M⟩ with M = G J G⁻¹ and ⟨A, M⟩ = Σ A_{ai} M_{ai}.
    let weight = g.matrix().mul(j).mul(g.inverse());
    let ops = tau.left_operators();
    let frob = |a: &Matrix<S>| linalg::dot(a.entries(), weight.entries());
    let linear: Vec<S> = ops.iter().map(frob).collect();
    let wt = weight.transpose();
    let pre: Vec<Matrix<S>> = ops.iter().map(|op| wt.mul(op)).collect();
    // tr(Mᵀ τ_x τ_y) = Σ (Mᵀτ_x)_{ab} (τ_y)_{ba}
    let quad = |x: usize, y: usize| linalg::dot(pre[x].entries(), ops[y].transpose().entries());
    let half = S::from_ratio(1, 2);
    Matrix::from_fn(m, m, |x, y| {
        let lin = linalg::dot(bracket.at(x, y), &linear);
        (lin - &quad(x, y) + &quad(y, x)) * &half
    })
}

/// Lifts base-level blocks to a bilinear map on `Φ`. `blocks(a_is_h, b_is_h, x, y)`
/// returns the `(horizontal, vertical)` components of `τ(f_a, f_b)`.
fn assemble<S: Scalar>(n: usize, blocks: impl Fn(bool, bool, usize, usize) -> (Vec<S>, Vec<S>)) -> Bilinear<S> {
    Bilinear::from_fn(2 * n, |a, b| {
        let (h, v) = blocks(a < n, b < n, a % n, b % n);
        let mut out = h;
        out.extend(v);
        out
    })
}

fn zeros<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::zero(); n]
}

/// Closed-form Bismut product on `Φ`.
pub fn bismut_closed_form<S: Scalar>(ar: &AffineRiemann<S>) -> Bilinear<S> {
    let n = ar.dim();
    let l = ar.levi_civita().product();
    let gs = ar.difference().gamma_star();
    assemble(n, |ah, bh, x, y| match (ah, bh) {
        (true, true) => (l.at(x, y).to_vec(), zeros(n)),
        (false, false) => (linalg::vneg(gs.at(y, x)), zeros(n)),
        (false, true) => (zeros(n), gs.at(y, x).to_vec()),
        (true, false) => (zeros(n), l.at(x, y).to_vec()),
    })
}

/// Closed-form Chern product on `Φ`.
pub fn chern_closed_form<S: Scalar>(ar: &AffineRiemann<S>) -> Bilinear<S> {
    let n = ar.dim();
    let l = ar.levi_civita().product();
    let ga = ar.difference().antisymmetric_part();
    let gsym = ar.difference().symmetric_part();
    let la = l.sub(&ga);
    assemble(n, |ah, bh, x, y| match (ah, bh) {
        (true, true) => (la.at(x, y).to_vec(), zeros(n)),
        (false, false) => (linalg::vneg(gsym.at(x, y)), zeros(n)),
        (false, true) => (zeros(n), gsym.at(x, y).to_vec()),
        (true, false) => (zeros(n), la.at(x, y).to_vec()),
    })
}

/// Closed-form difference tensor `Γ` and adjoint `Γ*` of `Φ`.
pub fn phase_gamma_closed_form<S: Scalar>(ar: &AffineRiemann<S>) -> (Bilinear<S>, Bilinear<S>) {
    let n = ar.dim();
    let dt = ar.difference();
    let (g, gs) = (dt.gamma(), dt.gamma_star());
    let half = S::from_ratio(1, 2);
    let avg = |a: &[S], b: &[S]| linalg::vscale(&linalg::vadd(a, b), &half);
    let gamma = assemble(n, |ah, bh, x, y| match (ah, bh) {
        (true, true) => (g.at(x, y).to_vec(), zeros(n)),
        (true, false) => (zeros(n), avg(g.at(x, y), gs.at(x, y))),
        (false, true) => (zeros(n), avg(g.at(y, x), gs.at(y, x))),
        (false, false) => (linalg::vneg(&avg(gs.at(x, y), gs.at(y, x))), zeros(n)),
    });
    let gamma_star = assemble(n, |ah, bh, x, y| match (ah, bh) {
        (true, true) => (gs.at(x, y).to_vec(), zeros(n)),
        (true, false) => (zeros(n), avg(g.at(x, y), gs.at(x, y))),
        (false, true) => (zeros(n), linalg::vneg(&avg(g.at(x, y), gs.at(y, x)))),
        (false, false) => (avg(gs.at(x, y), gs.at(y, x)), zeros(n)),
    });
    (gamma, gamma_star)
}

/// Direct and closed-form descriptions of the difference tensor of `Φ`.
#[derive(Clone, Debug)]
pub struct PhaseGamma<S> {
    pub direct: DifferenceTensor<S>,
    pub closed_gamma: Bilinear<S>,
    pub closed_gamma_star: Bilinear<S>,
    /// `(tr γ − tr γ*)^h`.
    pub expected_tr_gamma: Vec<S>,
    /// `2 (tr γ*)^h`.
    pub expected_tr_gamma_star: Vec<S>,
}

impl<S: Scalar> PhaseGamma<S> {
    /// Names the first disagreement between direct and closed forms.
    pub fn defect(&self, tol: f64) -> Option<&'static str> {
        if !self.direct.gamma().sub(&self.closed_gamma).is_zero(tol) {
            return Some("gamma");
        }
        if !self.direct.gamma_star().sub(&self.closed_gamma_star).is_zero(tol) {
            return Some("gamma_star");
        }
        if !linalg::is_zero_vec(&linalg::vsub(self.direct.tr_gamma(), &self.expected_tr_gamma), tol) {
            return Some("tr_gamma");
        }
        if !linalg::is_zero_vec(&linalg::vsub(self.direct.tr_gamma_star(), &self.expected_tr_gamma_star), tol) {
            return Some("tr_gamma_star");
        }
        None
    }
}

/// `Γ = L^Φ − ⋆` computed directly, with the closed forms alongside.
pub fn gamma_phase_closed_forms<S: Scalar>(ar: &AffineRiemann<S>, ps: &PhaseStructure<S>) -> PhaseGamma<S> {
    let lc = levi_civita(ps.algebra(), ps.metric());
    let direct = DifferenceTensor::from_gamma(lc.product().sub(ps.algebra().product()), ps.metric());
    let (closed_gamma, closed_gamma_star) = phase_gamma_closed_form(ar);
    let dt = ar.difference();
    let two = S::from_i64(2);
    PhaseGamma {
        direct,
        closed_gamma,
        closed_gamma_star,
        expected_tr_gamma: ps.horizontal(&linalg::vsub(dt.tr_gamma(), dt.tr_gamma_star())),
        expected_tr_gamma_star: ps.horizontal(&linalg::vscale(dt.tr_gamma_star(), &two)),
    }
}

/// Closed-form Bismut curvature blocks, column `c` of entry `(a,b)` being `R(f_a,f_b) f_c`.
pub fn bismut_curvature_closed_form<S: Scalar>(ar: &AffineRiemann<S>) -> OperatorPairs<S> {
    let n = ar.dim();
    let dt = ar.difference();
    let (g, gs) = (dt.gamma(), dt.gamma_star());
    let k = ar.curvature();
    let dgs = ar.covariant_derivative(gs);
    let lift = |h: bool, v: Vec<S>| if h { [v, zeros(n)].concat() } else { [zeros(n), v].concat() };
    // γ*(γ*_z y, x)
    let nested = |z: usize, y: usize, x: usize| gs.apply(&gs.apply_left_basis(z, &linalg::basis_vector(n, y)), &linalg::basis_vector(n, x));
    let mixed = |x: usize, y: usize, z: usize| linalg::vadd(&gs.apply_left_basis(z, g.at(x, y)), dgs.at(x, z, y));
    OperatorPairs::from_fn(2 * n, |a, b| {
        let cols: Vec<Vec<S>> = (0..2 * n)
            .map(|c| {
                let (x, y, z, ch) = (a % n, b % n, c % n, c < n);
                match (a < n, b < n) {
                    (true, true) => lift(ch, k.get(x, y).column(z)),
                    (false, false) => lift(ch, linalg::vsub(&nested(z, y, x), &nested(z, x, y))),
                    (true, false) => {
                        let w = mixed(x, y, z);
                        if ch { lift(false, linalg::vneg(&w)) } else { lift(true, w) }
                    }
                    (false, true) => {
                        let w = mixed(y, x, z);
                        if ch { lift(false, w) } else { lift(true, linalg::vneg(&w)) }
                    }
                }
            })
            .collect();
        Matrix::from_columns(&cols)
    })
}

/// Closed-form Chern curvature blocks, column `c` of entry `(a,b)` being `R(f_a,f_b) f_c`.
pub fn chern_curvature_closed_form<S: Scalar>(ar: &AffineRiemann<S>) -> OperatorPairs<S> {
    let n = ar.dim();
    let dt = ar.difference();
    let gsym = dt.symmetric_part();
    let ganti = dt.antisymmetric_part();
    let s_ops = gsym.left_operators();
    let a_ops = ganti.left_operators();
    let dgsym = ar.covariant_derivative(&gsym);
    let lift = |h: bool, v: Vec<S>| if h { [v, zeros(n)].concat() } else { [zeros(n), v].concat() };
    // −D_x(γ^s)(y,z) + [γ^a_x, γ^s_y] z − γ^s_{γ_x y} z
    let mixed = |x: usize, y: usize, z: usize| {
        let comm = a_ops[x].commutator(&s_ops[y]).column(z);
        let nested = gsym.apply(dt.gamma().at(x, y), &linalg::basis_vector(n, z));
        linalg::vsub(&linalg::vsub(&comm, dgsym.at(x, y, z)), &nested)
    };
    OperatorPairs::from_fn(2 * n, |a, b| {
        let cols: Vec<Vec<S>> = (0..2 * n)
            .map(|c| {
                let (x, y, z, ch) = (a % n, b % n, c % n, c < n);
                match (a < n, b < n) {
                    (true, true) | (false, false) => lift(ch, s_ops[x].commutator(&s_ops[y]).column(z)),
                    (true, false) => {
                        let w = mixed(x, y, z);
                        if ch { lift(false, w) } else { lift(true, linalg::vneg(&w)) }
                    }
                    (false, true) => {
                        let w = mixed(y, x, z);
                        if ch { lift(false, linalg::vneg(&w)) } else { lift(true, w) }
                    }
                }
            })
            .collect();
        Matrix::from_columns(&cols)
    })
}
