//! Explicit metric families on boxes of `ℝⁿ`, built as expression metrics so
//! they carry symbolic derivatives.

use crate::error::{ChartError, Result};
use crate::expr::Expr;
use crate::metric::{BoxDomain, ExprMetric};

fn parse_all(upper: &[String], domain: BoxDomain) -> Result<ExprMetric> {
    let refs: Vec<&str> = upper.iter().map(String::as_str).collect();
    ExprMetric::parse(&refs, domain)
}

fn upper_from(n: usize, mut entry: impl FnMut(usize, usize) -> String) -> Vec<String> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| entry(i, j)).collect()
}

/// Fails unless `e` depends on at most the variable `allowed`.
fn only_depends_on(e: &Expr, allowed: Option<usize>, n: usize, what: &str) -> Result<()> {
    match (0..n.max(e.arity())).find(|&v| Some(v) != allowed && e.depends_on(v)) {
        Some(v) => Err(ChartError::InvalidMetric(format!("{what} must not depend on x{}", v + 1))),
        None => Ok(()),
    }
}

fn wrap(text: &str) -> Result<String> {
    Expr::parse(text)?;
    Ok(format!("({text})"))
}

/// Default box for the radial Hessian family: `x₁ ∈ [½, 2]`, others in `[−3/2, 3/2]`.
pub fn exemple_domain(n: usize) -> BoxDomain {
    let mut lo = vec![-1.5; n];
    let mut hi = vec![1.5; n];
    lo[0] = 0.5;
    hi[0] = 2.0;
    BoxDomain { lo, hi }
}

pub fn exemple_fixture(n: usize, c: f64) -> Result<ExprMetric> {
    exemple_fixture_on(n, c, exemple_domain(n))
}

/// Hessian of the radial potential with `f'(r) = (rⁿ + c)^{1/n}` on `ℝⁿ∖{0}`:
/// `μ_ii = (r^{n+2} + c(r² − x_i²)) / (r³ (rⁿ + c)^{(n−1)/n})` and
/// `μ_ij = −c x_i x_j / (r³ (rⁿ + c)^{(n−1)/n})`.
pub fn exemple_fixture_on(n: usize, c: f64, domain: BoxDomain) -> Result<ExprMetric> {
    if n < 2 || domain.dim() != n {
        return Err(ChartError::InvalidMetric(format!("radial family needs n ≥ 2 and an n-dimensional box, got n = {n}")));
    }
    if !(c > 0.0) {
        return Err(ChartError::InvalidMetric(format!("radial family needs c > 0, got {c}")));
    }
    if domain.contains_origin() {
        return Err(ChartError::DomainContainsOrigin);
    }
    let r2 = (1..=n).map(|i| format!("x{i}^2")).collect::<Vec<_>>().join(" + ");
    let r = format!("sqrt({r2})");
    let denom = format!("({r}^3 * ({r}^{n} + {c})^({}/{n}))", n - 1);
    let upper = upper_from(n, |i, j| {
        if i == j {
            format!("({r}^{} + {c} * ({r2} - x{}^2)) / {denom}", n + 2, i + 1)
        } else {
            format!("-{c} * x{} * x{} / {denom}", i + 1, j + 1)
        }
    });
    parse_all(&upper, domain)
}

/// `[[cosh f, sinh f], [sinh f, cosh f]]`, which has determinant 1.
pub fn exem2_fixture(f: &str, domain: BoxDomain) -> Result<ExprMetric> {
    let f = wrap(f)?;
    parse_all(&[format!("cosh{f}"), format!("sinh{f}"), format!("cosh{f}")], domain)
}

/// `μ₁₂ = e^{x₁+x₂}`, `μ₁₁ = e^{x₁+x₂} + e^{f(x₁)}`, `μ₂₂ = e^{x₁+x₂} + e^{h(x₂)}`.
pub fn exem3_fixture(f: &str, h: &str, domain: BoxDomain) -> Result<ExprMetric> {
    let (fe, he) = (Expr::parse(f)?, Expr::parse(h)?);
    only_depends_on(&fe, Some(0), 2, "f")?;
    only_depends_on(&he, Some(1), 2, "h")?;
    dim2_fixture(&format!("exp({f})"), &format!("exp({h})"), domain)
}

/// The balanced two-dimensional family with `ν = e^{x₁+x₂}`:
/// `μ₁₂ = ν`, `μ₁₁ = f(x₁) + ∫∂₁ν dx₂`, `μ₂₂ = h(x₂) + ∫∂₂ν dx₁`, with both
/// antiderivatives taken as `e^{x₁+x₂}` (integration constants zero).
pub fn dim2_fixture(f: &str, h: &str, domain: BoxDomain) -> Result<ExprMetric> {
    let (fe, he) = (Expr::parse(f)?, Expr::parse(h)?);
    only_depends_on(&fe, Some(0), 2, "f")?;
    only_depends_on(&he, Some(1), 2, "h")?;
    let nu = "exp(x1 + x2)";
    parse_all(&[format!("({f}) + {nu}"), nu.to_string(), format!("({h}) + {nu}")], domain)
}

/// Diagonal metric `μ_j = (f₁⋯f_n)^{2^{k₀−1}} / f_j^{n·2^{k₀−1} − 1}` with
/// `f_j` positive and independent of `x_j`; balanced exactly at level `k₀`.
///
/// With `m = 2^{k₀−1}`, level `k₀` is balanced iff every
/// `ρ_j = (μ₁⋯μ_n)^m / μ_j` is independent of `x_j`. Setting `f_j = ρ_j^{1/(nm−1)}`
/// and using `ρ₁⋯ρ_n = (μ₁⋯μ_n)^{nm−1}` inverts to the formula above.
pub fn dimn_fixture(fs: &[&str], k0: u32, domain: BoxDomain) -> Result<ExprMetric> {
    let n = fs.len();
    if k0 == 0 || domain.dim() != n {
        return Err(ChartError::InvalidMetric("needs k₀ ≥ 1 and one function per coordinate".into()));
    }
    for (j, f) in fs.iter().enumerate() {
        let e = Expr::parse(f)?;
        if e.depends_on(j) {
            return Err(ChartError::InvalidMetric(format!("f{} must not depend on x{}", j + 1, j + 1)));
        }
    }
    let m = 1u64 << (k0 - 1);
    let product = fs.iter().map(|f| format!("({f})")).collect::<Vec<_>>().join(" * ");
    let exponent = n as u64 * m - 1;
    let upper = upper_from(n, |i, j| {
        if i == j {
            format!("({product})^{m} / ({})^{exponent}", fs[i])
        } else {
            "0".into()
        }
    });
    parse_all(&upper, domain)
}

/// Diagonal metric `μ_i = e^{f_i(x_i)}`.
pub fn cop1_fixture(fs: &[&str], domain: BoxDomain) -> Result<ExprMetric> {
    let n = fs.len();
    for (i, f) in fs.iter().enumerate() {
        only_depends_on(&Expr::parse(f)?, Some(i), n, &format!("f{}", i + 1))?;
    }
    let upper = upper_from(n, |i, j| if i == j { format!("exp({})", fs[i]) } else { "0".into() });
    parse_all(&upper, domain)
}

/// `μ₁₁ = 1 + x₂²`, `μ₂₂ = 1`, `μ₁₂ = 0`: not pluriclosed, with residual 2 everywhere.
pub fn pluriclosed_negative_control(domain: BoxDomain) -> Result<ExprMetric> {
    ExprMetric::parse(&["1 + x2^2", "0", "1"], domain)
}

/// Constant metric from its upper triangle.
pub fn constant_fixture(upper: &[f64], domain: BoxDomain) -> Result<ExprMetric> {
    let exprs = upper.iter().map(|v| Expr::Num(*v)).collect();
    ExprMetric::new(exprs, domain)
}
