//! Generalized-Kähler predicates of the first tangent lift, evaluated with the
//! reduced algebra-level criteria.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::Algebra;
use crate::connection::AffineRiemann;
use crate::error::Result;
use crate::levi_civita::contract_trace;
use crate::linalg::{self, Matrix};
use crate::metric::Metric;
use crate::scalar::Scalar;
use crate::tensor::Bilinear;

pub const DEFAULT_K_MAX: usize = 5;

/// First failing basis tuple (0-based) and the residual there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub residual_norm: f64,
}

impl Flag {
    fn pass() -> Self {
        Flag { holds: true, witness: None, residual_norm: 0.0 }
    }

    fn from_defect<S: Scalar>(defect: Option<(Vec<usize>, S)>, residual_norm: f64) -> Self {
        match defect {
            None => Flag { holds: true, witness: None, residual_norm },
            Some((tuple, value)) => Flag {
                holds: false,
                witness: Some(Witness { tuple, value: scalar_json(&value) }),
                residual_norm,
            },
        }
    }

    fn and(self, other: Flag) -> Flag {
        if !self.holds {
            return self;
        }
        Flag { residual_norm: self.residual_norm.max(other.residual_norm), ..other }
    }

    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({ "tuple": w.tuple.iter().map(|i| i + 1).collect::<Vec<_>>(), "value": w.value })
        });
        json!({ "holds": self.holds, "witness": witness, "residual_norm": self.residual_norm })
    }
}

/// Rationals render as `"p/q"` strings, floats as JSON numbers.
pub fn scalar_json<S: Scalar>(value: &S) -> Value {
    if S::EXACT {
        Value::String(value.to_string())
    } else {
        json!(value.to_f64())
    }
}

/// The real `k` with `tr γ = (2^k − 1) tr γ*`, when the traces are parallel.
#[derive(Clone, Debug, PartialEq)]
pub struct BalancedExponent {
    /// `λ` with `tr γ = λ tr γ*`, rendered like the scalars of the report.
    pub ratio: Value,
    /// `log2(λ + 1)`; absent when `λ ≤ −1`.
    pub k: Option<f64>,
    /// Set when `λ + 1` is a positive integral power of two.
    pub integer_k: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub kahler: Flag,
    pub hessian: Flag,
    /// Entry `k − 1` is the balanced criterion at level `k`.
    pub balanced: Vec<Flag>,
    pub balanced_exponent: Option<BalancedExponent>,
    pub lcb: Flag,
    pub gauduchon: Flag,
    pub lck: Flag,
    pub vaisman: Flag,
    pub pluriclosed: Flag,
    pub rigid: Flag,
    pub infinitely_balanced: Flag,
    pub cyt: Flag,
    pub chern_ricci_flat: Flag,
}

impl ClassificationReport {
    pub fn balanced_at(&self, k: usize) -> bool {
        self.balanced[k - 1].holds
    }

    /// Named flags in a fixed order, balanced levels as `balanced_k`.
    pub fn flags(&self) -> Vec<(String, &Flag)> {
        let mut out = vec![("kahler".to_string(), &self.kahler), ("hessian".to_string(), &self.hessian)];
        for (i, f) in self.balanced.iter().enumerate() {
            out.push((format!("balanced_{}", i + 1), f));
        }
        for (name, f) in [
            ("lcb", &self.lcb),
            ("gauduchon", &self.gauduchon),
            ("lck", &self.lck),
            ("vaisman", &self.vaisman),
            ("pluriclosed", &self.pluriclosed),
            ("rigid", &self.rigid),
            ("infinitely_balanced", &self.infinitely_balanced),
            ("cyt", &self.cyt),
            ("chern_ricci_flat", &self.chern_ricci_flat),
        ] {
            out.push((name.to_string(), f));
        }
        out
    }

    pub fn flag(&self, name: &str) -> Option<&Flag> {
        self.flags().into_iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (name, flag) in self.flags() {
            map.insert(name, flag.to_json());
        }
        let exponent = self
            .balanced_exponent
            .as_ref()
            .map(|e| json!({ "ratio": e.ratio, "k": e.k, "integer_k": e.integer_k }));
        map.insert("balanced_exponent".into(), exponent.unwrap_or(Value::Null));
        Value::Object(map)
    }
}

/// Classifies `(alg, g)` with levels `1..=k_max` for the balanced criterion.
pub fn classify<S: Scalar>(alg: &Algebra<S>, g: &Metric<S>, k_max: usize) -> Result<ClassificationReport> {
    let ar = AffineRiemann::new(alg.clone(), g.clone())?;
    Ok(classify_structure(&ar, k_max))
}

pub fn classify_structure<S: Scalar>(ar: &AffineRiemann<S>, k_max: usize) -> ClassificationReport {
    let tol = ar.tol();
    let dt = ar.difference();
    if dt.is_zero(tol) {
        // γ = 0: Kähler and flat at every level.
        return ClassificationReport {
            kahler: Flag::pass(),
            hessian: Flag::pass(),
            balanced: vec![Flag::pass(); k_max],
            balanced_exponent: None,
            lcb: Flag::pass(),
            gauduchon: Flag::pass(),
            lck: Flag::pass(),
            vaisman: Flag::pass(),
            pluriclosed: Flag::pass(),
            rigid: Flag::pass(),
            infinitely_balanced: Flag::pass(),
            cyt: Flag::pass(),
            chern_ricci_flat: Flag::pass(),
        };
    }
    let kahler_residual = dt.gamma().sub(dt.gamma_star());
    let kahler = bilinear_flag(&kahler_residual, tol);
    let balanced = (1..=k_max).map(|k| balanced_flag(ar, k)).collect();
    let (_, dxi) = ar.koszul_closedness();
    let lcb = matrix_flag(&dxi, tol);
    ClassificationReport {
        kahler,
        hessian: hessian_flag(ar),
        balanced,
        balanced_exponent: balanced_exponent(ar),
        lcb,
        gauduchon: gauduchon_flag(ar),
        lck: lck_flag(ar),
        vaisman: lck_flag(ar).and(parallel_pi_flag(ar)),
        pluriclosed: pluriclosed_flag(ar),
        rigid: rigid_flag(ar),
        infinitely_balanced: vector_flag(dt.tr_gamma(), tol).and(vector_flag(dt.tr_gamma_star(), tol)),
        cyt: matrix_flag(&ar.ricci_bismut().mixed, tol),
        chern_ricci_flat: matrix_flag(&ar.ricci_chern().mixed, tol),
    }
}

fn bilinear_flag<S: Scalar>(b: &Bilinear<S>, tol: f64) -> Flag {
    let defect = b.first_nonzero(tol).map(|((i, j, k), v)| (vec![i, j, k], v));
    Flag::from_defect(defect, b.max_abs())
}

fn matrix_flag<S: Scalar>(m: &Matrix<S>, tol: f64) -> Flag {
    let defect = m.first_nonzero(tol).map(|(i, j, v)| (vec![i, j], v));
    Flag::from_defect(defect, m.max_abs())
}

fn vector_flag<S: Scalar>(v: &[S], tol: f64) -> Flag {
    let defect = linalg::first_nonzero_vec(v, tol).map(|(i, x)| (vec![i], x));
    Flag::from_defect(defect, linalg::max_abs_vec(v))
}

/// `tr γ − (2^k − 1) tr γ*`.
pub fn balanced_residual<S: Scalar>(ar: &AffineRiemann<S>, k: usize) -> Vec<S> {
    let dt = ar.difference();
    let factor = S::from_i64((1i64 << k) - 1);
    linalg::vsub(dt.tr_gamma(), &linalg::vscale(dt.tr_gamma_star(), &factor))
}

fn balanced_flag<S: Scalar>(ar: &AffineRiemann<S>, k: usize) -> Flag {
    vector_flag(&balanced_residual(ar, k), ar.tol())
}

fn balanced_exponent<S: Scalar>(ar: &AffineRiemann<S>) -> Option<BalancedExponent> {
    let tol = ar.tol();
    let dt = ar.difference();
    let (i, pivot) = linalg::first_nonzero_vec(dt.tr_gamma_star(), tol)?;
    let ratio = dt.tr_gamma()[i].clone() / &pivot;
    let residual = linalg::vsub(dt.tr_gamma(), &linalg::vscale(dt.tr_gamma_star(), &ratio));
    if !linalg::is_zero_vec(&residual, tol) {
        return None;
    }
    let shifted = ratio.clone() + &S::one();
    let k = shifted.is_positive(tol).then(|| shifted.to_f64().log2());
    let integer_k = (1..63u32).find(|&k| (shifted.clone() - &S::from_i64(1i64 << k)).is_negligible(tol));
    Some(BalancedExponent { ratio: scalar_json(&ratio), k, integer_k })
}

/// Codazzi form: `(∇_u g)(v, w) = −⟨u•v, w⟩ − ⟨v, u•w⟩` symmetric in `(u, v)`.
fn hessian_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    let n = ar.dim();
    let g = ar.metric();
    let prod = ar.algebra().product();
    let e = |i| linalg::basis_vector::<S>(n, i);
    let nabla_g = |u: usize, v: usize, w: usize| -(g.inner(prod.at(u, v), &e(w)) + &g.inner(&e(v), prod.at(u, w)));
    let residual = Bilinear::from_fn(n, |u, v| (0..n).map(|w| nabla_g(u, v, w) - &nabla_g(v, u, w)).collect());
    bilinear_flag(&residual, ar.tol())
}

/// Left-invariant codifferential of a 1-form, `d*η = η(Σ g^{ij} L_{e_i} e_j)`.
pub fn codifferential_1form<S: Scalar>(ar: &AffineRiemann<S>, eta: &[S]) -> S {
    linalg::dot(eta, &contract_trace(ar.levi_civita().product(), ar.metric()))
}

/// `d*(α − ξ) − (|tr γ*|² − ⟨tr γ*, tr γ⟩)`.
pub fn gauduchon_residual<S: Scalar>(ar: &AffineRiemann<S>) -> S {
    let dt = ar.difference();
    let g = ar.metric();
    let lhs = codifferential_1form(ar, &dt.theta0());
    let rhs = g.norm_squared(dt.tr_gamma_star()) - &g.inner(dt.tr_gamma_star(), dt.tr_gamma());
    lhs - &rhs
}

fn gauduchon_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    let r = gauduchon_residual(ar);
    let norm = r.abs_f64();
    let defect = (!r.is_negligible(ar.tol())).then(|| (vec![], r));
    Flag::from_defect(defect, norm)
}

/// `(n−1)(γ*_u v − γ*_v u) − θ₀(u) v + θ₀(v) u` for basis pairs.
pub fn lck_residual<S: Scalar>(ar: &AffineRiemann<S>) -> Bilinear<S> {
    let n = ar.dim();
    let gs = ar.difference().gamma_star();
    let theta = ar.difference().theta0();
    let scale = S::from_i64(n as i64 - 1);
    Bilinear::from_fn(n, |u, v| {
        let mut r = linalg::vscale(&linalg::vsub(gs.at(u, v), gs.at(v, u)), &scale);
        r[v] -= &theta[u];
        r[u] += &theta[v];
        r
    })
}

fn lck_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    bilinear_flag(&lck_residual(ar), ar.tol())
}

/// Rows `0..n` hold `L_u Π`, rows `n..2n` hold `u • Π`.
fn parallel_pi_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    let n = ar.dim();
    let pi = ar.difference().pi();
    let mut rows = Vec::with_capacity(2 * n);
    for u in 0..n {
        rows.push(ar.levi_civita().operator(u).mul_vec(&pi));
    }
    for u in 0..n {
        rows.push(ar.algebra().left_mult(u).mul_vec(&pi));
    }
    matrix_flag(&Matrix::from_rows(rows), ar.tol())
}

fn pluriclosed_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    let residual = crate::hermitian::pluriclosed_residual(ar);
    let defect = residual.first_nonzero(ar.tol()).map(|((u, v, r, c), x)| (vec![u, v, r, c], x));
    Flag::from_defect(defect, residual.max_abs())
}

/// `D(γ) = 0`.
fn rigid_flag<S: Scalar>(ar: &AffineRiemann<S>) -> Flag {
    let dg = ar.covariant_derivative(ar.difference().gamma());
    let defect = dg.first_nonzero(ar.tol()).map(|((x, y, z, k), v)| (vec![x, y, z, k], v));
    Flag::from_defect(defect, dg.max_abs())
}
