//! Difference tensor `γ = L − •`, its adjoint, the Koszul forms, covariant
//! derivatives with respect to the Levi-Civita product, and curvature.

use crate::algebra::Algebra;
use crate::error::Result;
use crate::levi_civita::{contract_trace, contract_with, levi_civita, LcProduct};
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::scalar::Scalar;
use crate::tensor::{Bilinear, OperatorPairs, Trilinear};

#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceTensor<S> {
    gamma: Bilinear<S>,
    gamma_star: Bilinear<S>,
    tr_gamma: Vec<S>,
    tr_gamma_star: Vec<S>,
    alpha: Vec<S>,
    xi: Vec<S>,
}

impl<S: Scalar> DifferenceTensor<S> {
    /// Builds `γ*`, the traces and the Koszul forms from `γ`.
    pub fn from_gamma(gamma: Bilinear<S>, g: &Metric<S>) -> Self {
        let gamma_star = adjoint(&gamma, g);
        let tr_gamma = contract_trace(&gamma, g);
        let tr_gamma_star = contract_trace(&gamma_star, g);
        let alpha = g.lower(&tr_gamma_star);
        let xi = g.lower(&tr_gamma);
        DifferenceTensor { gamma, gamma_star, tr_gamma, tr_gamma_star, alpha, xi }
    }

    pub fn gamma(&self) -> &Bilinear<S> {
        &self.gamma
    }

    pub fn gamma_star(&self) -> &Bilinear<S> {
        &self.gamma_star
    }

    /// `Σ g^{ij} γ_{e_i} e_j`.
    pub fn tr_gamma(&self) -> &[S] {
        &self.tr_gamma
    }

    /// `Σ g^{ij} γ*_{e_i} e_j`.
    pub fn tr_gamma_star(&self) -> &[S] {
        &self.tr_gamma_star
    }

    /// First Koszul form `α = ⟨tr γ*, ·⟩`.
    pub fn alpha(&self) -> &[S] {
        &self.alpha
    }

    /// Adjoint Koszul form `ξ = ⟨tr γ, ·⟩`.
    pub fn xi(&self) -> &[S] {
        &self.xi
    }

    /// `θ₀ = α − ξ`.
    pub fn theta0(&self) -> Vec<S> {
        linalg::vsub(&self.alpha, &self.xi)
    }

    /// `Π = tr γ* − tr γ`, the vector dual to `θ₀`.
    pub fn pi(&self) -> Vec<S> {
        linalg::vsub(&self.tr_gamma_star, &self.tr_gamma)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.gamma.is_zero(tol)
    }

    /// `γ^s = ½(γ + γ*)`.
    pub fn symmetric_part(&self) -> Bilinear<S> {
        self.gamma.add(&self.gamma_star).scale(&S::from_ratio(1, 2))
    }

    /// `γ^a = ½(γ − γ*)`.
    pub fn antisymmetric_part(&self) -> Bilinear<S> {
        self.gamma.sub(&self.gamma_star).scale(&S::from_ratio(1, 2))
    }
}

/// Metric adjoint in the second slot: `⟨T*_u v, w⟩ = ⟨v, T_u w⟩`, i.e. `T*_u = G⁻¹ T_uᵀ G`.
pub fn adjoint<S: Scalar>(t: &Bilinear<S>, g: &Metric<S>) -> Bilinear<S> {
    let ops: Vec<Matrix<S>> = (0..t.dim())
        .map(|i| g.inverse().mul(&t.left_operator(i).transpose()).mul(g.matrix()))
        .collect();
    Bilinear::from_left_operators(&ops)
}

/// An algebra with a metric and every first-order object derived from them.
#[derive(Clone, Debug)]
pub struct AffineRiemann<S> {
    alg: Algebra<S>,
    metric: Metric<S>,
    lc: LcProduct<S>,
    dt: DifferenceTensor<S>,
}

impl<S: Scalar> AffineRiemann<S> {
    /// Fails with `NotLeftSymmetric` or on a dimension mismatch.
    pub fn new(alg: Algebra<S>, metric: Metric<S>) -> Result<Self> {
        alg.require_left_symmetric()?;
        if alg.dim() != metric.dim() {
            return Err(crate::error::Error::Shape(format!(
                "algebra has dimension {}, metric {}",
                alg.dim(),
                metric.dim()
            )));
        }
        let lc = levi_civita(&alg, &metric);
        let gamma = lc.product().sub(alg.product());
        let dt = DifferenceTensor::from_gamma(gamma, &metric);
        Ok(AffineRiemann { alg, metric, lc, dt })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn algebra(&self) -> &Algebra<S> {
        &self.alg
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn levi_civita(&self) -> &LcProduct<S> {
        &self.lc
    }

    pub fn difference(&self) -> &DifferenceTensor<S> {
        &self.dt
    }

    pub fn tol(&self) -> f64 {
        self.alg.tolerance()
    }

    /// `D_x(T)(y, z) = L_x(T(y,z)) − T(L_x y, z) − T(y, L_x z)`.
    pub fn covariant_derivative(&self, t: &Bilinear<S>) -> Trilinear<S> {
        let n = self.dim();
        let l_ops: Vec<Matrix<S>> = (0..n).map(|x| self.lc.operator(x)).collect();
        let t_ops: Vec<Matrix<S>> = t.left_operators();
        let mut blocks: Vec<Matrix<S>> = Vec::with_capacity(n * n);
        for lx in &l_ops {
            for (y, ty) in t_ops.iter().enumerate() {
                let mut m = lx.mul(ty).sub(&ty.mul(lx));
                for (w, tw) in t_ops.iter().enumerate() {
                    let c = lx.get(w, y);
                    if !c.is_exact_zero() {
                        m = m.sub(&tw.scale(c));
                    }
                }
                blocks.push(m);
            }
        }
        Trilinear::from_fn(n, |x, y, z| blocks[x * n + y].column(z))
    }

    /// `tr_g(D_u T) = Σ g^{ij} D_u(T)(e_i, e_j)` for each basis `u`, as columns.
    pub fn traced_derivative(&self, t: &Bilinear<S>) -> Vec<Vec<S>> {
        let n = self.dim();
        let ginv = self.metric.inverse();
        let tr_t = contract_with(t, ginv);
        (0..n)
            .map(|u| {
                let lu = self.lc.operator(u);
                let first = lu.mul(ginv);
                let second = ginv.mul(&lu.transpose());
                let mut v = lu.mul_vec(&tr_t);
                v = linalg::vsub(&v, &contract_with(t, &first));
                linalg::vsub(&v, &contract_with(t, &second))
            })
            .collect()
    }

    /// `K(u,v) = L_{[u,v]} − L_u L_v + L_v L_u`.
    pub fn curvature(&self) -> OperatorPairs<S> {
        let n = self.dim();
        let ops: Vec<Matrix<S>> = (0..n).map(|x| self.lc.operator(x)).collect();
        let br = self.alg.bracket();
        OperatorPairs::from_fn(n, |u, v| {
            let bracket_op = self.lc.product().left_operator_of(br.at(u, v));
            bracket_op.sub(&ops[u].commutator(&ops[v]))
        })
    }

    /// `(dα, dξ)` with `dη(a, b) = −η([a, b])`, as antisymmetric matrices.
    pub fn koszul_closedness(&self) -> (Matrix<S>, Matrix<S>) {
        let d = |eta: &[S]| exterior_derivative_1form(self.alg.bracket(), eta);
        (d(self.dt.alpha()), d(self.dt.xi()))
    }

    /// Bismut Ricci form on `(u^h, v^v)`: `−⟨γ_u v, tr γ⟩ − ⟨tr_g(D_u γ), v⟩`.
    pub fn ricci_bismut(&self) -> RicciForm<S> {
        self.ricci_from(self.dt.gamma(), self.dt.tr_gamma())
    }

    /// Chern Ricci form on `(u^h, v^v)`: `−⟨γ_u v, tr γ*⟩ − ⟨tr_g(D_u γ*), v⟩`.
    pub fn ricci_chern(&self) -> RicciForm<S> {
        self.ricci_from(self.dt.gamma_star(), self.dt.tr_gamma_star())
    }

    fn ricci_from(&self, traced: &Bilinear<S>, trace_vec: &[S]) -> RicciForm<S> {
        let n = self.dim();
        let dtr = self.traced_derivative(traced);
        let gamma = self.dt.gamma();
        let tr_low = self.metric.lower(trace_vec);
        let mixed = Matrix::from_fn(n, n, |u, v| {
            let a = linalg::dot(gamma.at(u, v), &tr_low);
            let b = self.metric.inner(&dtr[u], &linalg::basis_vector(n, v));
            -(a + &b)
        });
        RicciForm { mixed }
    }

    /// Ricci quadratic form of the Levi-Civita curvature: `ric(u,u) = −tr(z ↦ K(z,u)u)`.
    pub fn ricci_quadratic(&self, u: &[S]) -> S {
        let n = self.dim();
        let curvature = self.curvature();
        let mut acc = S::zero();
        for z in 0..n {
            // coefficient of e_z in K(e_z, u)u
            let mut op = Matrix::zeros(n, n);
            for (w, uw) in u.iter().enumerate() {
                if !uw.is_exact_zero() {
                    op = op.add(&curvature.get(z, w).scale(uw));
                }
            }
            acc -= &op.mul_vec(u)[z];
        }
        acc
    }
}

/// `dη(a, b) = −η([a, b])` on basis pairs.
pub fn exterior_derivative_1form<S: Scalar>(bracket: &Bilinear<S>, eta: &[S]) -> Matrix<S> {
    let n = bracket.dim();
    Matrix::from_fn(n, n, |a, b| -linalg::dot(bracket.at(a, b), eta))
}

/// A 2-form on the phase algebra supported on mixed pairs:
/// `ρ(f_u, f_{n+v}) = mixed[u][v] = −ρ(f_{n+v}, f_u)`, zero on `(h,h)` and `(v,v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciForm<S> {
    pub mixed: Matrix<S>,
}

impl<S: Scalar> RicciForm<S> {
    /// Full `2n × 2n` matrix in the phase basis.
    pub fn to_phase_matrix(&self) -> Matrix<S> {
        let n = self.mixed.rows();
        Matrix::from_fn(2 * n, 2 * n, |a, b| match (a < n, b < n) {
            (true, false) => self.mixed.get(a, b - n).clone(),
            (false, true) => -self.mixed.get(b, a - n).clone(),
            _ => S::zero(),
        })
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.mixed.is_zero(tol)
    }
}

/// Difference tensor of an algebra and metric; fails on non-left-symmetric input.
pub fn difference_tensor<S: Scalar>(alg: &Algebra<S>, g: &Metric<S>) -> Result<DifferenceTensor<S>> {
    Ok(AffineRiemann::new(alg.clone(), g.clone())?.dt)
}
