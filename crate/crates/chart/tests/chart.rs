use gkforge_chart::checks::{
    christoffel_at, derivative_sanity_check, determinant_check, ricci_fd_oracle, ricci_nonnegative_check,
    richardson_koszul, trace_gamma_check,
};
use gkforge_chart::fixtures::{
    constant_fixture, cop1_fixture, dim2_fixture, dimn_fixture, exem2_fixture, exem3_fixture, exemple_fixture,
    exemple_fixture_on, pluriclosed_negative_control,
};
use gkforge_chart::metric::FiniteDifferenceOnly;
use gkforge_chart::{
    balanced_k_check, hessian_check, koszul_at, pluriclosed_check, ricci_quadratic_at, BoxDomain, ChartError,
    ChartMetric, ExprMetric, SamplePlan,
};

fn plan(m: &dyn ChartMetric, count: usize) -> SamplePlan {
    SamplePlan::halton(m.domain(), count, 42).unwrap()
}

fn square() -> BoxDomain {
    BoxDomain::cube(2, -1.0, 1.0)
}

/// Hessian of `F(r)` with `F'(r) = (rⁿ + c)^{1/n}`:
/// `∂_i∂_j F = F'' x_i x_j / r² + (F'/r)(δ_ij − x_i x_j / r²)`.
fn radial_hessian(x: &[f64], c: f64) -> Vec<Vec<f64>> {
    let n = x.len() as f64;
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let f1 = (r.powf(n) + c).powf(1.0 / n);
    let f2 = r.powf(n - 1.0) * (r.powf(n) + c).powf(1.0 / n - 1.0);
    (0..x.len())
        .map(|i| {
            (0..x.len())
                .map(|j| {
                    let p = x[i] * x[j] / (r * r);
                    f2 * p + f1 / r * (if i == j { 1.0 } else { 0.0 } - p)
                })
                .collect()
        })
        .collect()
}

#[test]
fn radial_family_entries_are_the_hessian_of_the_radial_potential() {
    for (n, c) in [(2, 1.0), (3, 0.5), (4, 2.0)] {
        let m = exemple_fixture(n, c).unwrap();
        for x in plan(&m, 16).points {
            let g = m.eval(&x);
            let h = radial_hessian(&x, c);
            for i in 0..n {
                for j in 0..n {
                    assert!((g.get(i, j) - h[i][j]).abs() < 1e-12, "n={n} c={c} x={x:?}");
                }
            }
        }
    }
}

#[test]
fn radial_family_on_the_first_axis() {
    let m = exemple_fixture(2, 1.0).unwrap();
    let g = m.eval(&[1.0, 0.0]);
    assert!((g.get(0, 0) - 0.5_f64.sqrt()).abs() < 1e-15);
    assert!((g.get(1, 1) - 2.0_f64.sqrt()).abs() < 1e-15);
    assert_eq!(*g.get(0, 1), 0.0);
}

#[test]
fn radial_family_gates() {
    for n in [2, 3, 4] {
        for c in [0.5, 1.0, 2.0] {
            let m = exemple_fixture(n, c).unwrap();
            let p = plan(&m, 64);
            let det = determinant_check(&m, &p.clone().with_tolerance(1e-9), 1.0).unwrap();
            assert!(det.holds, "n={n} c={c}: {det:?}");
            let hess = hessian_check(&m, &p).unwrap();
            assert!(hess.holds && hess.tolerance == 1e-7, "n={n} c={c}: {hess:?}");
            let tr = trace_gamma_check(&m, &p.clone().with_tolerance(1e-6)).unwrap();
            assert!(tr.holds, "n={n} c={c}: {tr:?}");
            let ric = ricci_nonnegative_check(&m, &p).unwrap();
            assert!(ric.holds, "n={n} c={c}: {ric:?}");
            assert!(derivative_sanity_check(&m, &plan(&m, 8)).unwrap().holds);
        }
    }
}

#[test]
fn radial_family_rejects_the_origin() {
    let err = exemple_fixture_on(2, 1.0, square()).unwrap_err();
    assert_eq!(err, ChartError::DomainContainsOrigin);
}

#[test]
fn koszul_forms_match_independent_differences() {
    let m = exem3_fixture("x1^2 / 2", "sinh(x2)", square()).unwrap();
    for x in plan(&m, 6).points {
        let (alpha, xi) = koszul_at(&m, &x).unwrap();
        let h = 1e-5;
        for j in 0..2 {
            let mut p = x.clone();
            let mut q = x.clone();
            p[j] += h;
            q[j] -= h;
            let oracle = 0.25 * (m.eval(&p).det().ln() - m.eval(&q).det().ln()) / h;
            assert!((alpha[j] - oracle).abs() < 1e-8, "alpha_{j} at {x:?}");
        }
        // ξ_j = g_{jc} g^{ab} Γ^c_{ab}
        let g = m.eval(&x);
        let ginv = g.inverse().unwrap();
        let gamma = christoffel_at(&FiniteDifferenceOnly(m.clone()), &x).unwrap();
        for j in 0..2 {
            let mut acc = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    for c in 0..2 {
                        acc += g.get(j, c) * ginv.get(a, b) * gamma[a].get(c, b);
                    }
                }
            }
            assert!((xi[j] - acc).abs() < 1e-7, "xi_{j} at {x:?}: {} vs {acc}", xi[j]);
        }
    }
}

#[test]
fn constant_metric_is_trivially_everything() {
    let m = constant_fixture(&[2.0, 0.5, 0.0, 1.0, 0.25, 3.0], BoxDomain::cube(3, -1.0, 1.0)).unwrap();
    let p = plan(&m, 8);
    let (alpha, xi) = koszul_at(&m, &p.points[0]).unwrap();
    assert!(alpha.iter().chain(&xi).all(|v| *v == 0.0));
    assert!(hessian_check(&m, &p).unwrap().holds);
    assert!(pluriclosed_check(&m, &p).unwrap().holds);
    for k in 1..=4 {
        assert!(balanced_k_check(&m, &p, k).unwrap().holds);
    }
    assert_eq!(ricci_quadratic_at(&m, &p.points[0], &[1.0, -1.0, 2.0]).unwrap(), 0.0);
}

#[test]
fn unit_determinant_family_has_vanishing_alpha() {
    let m = exem2_fixture("x1 * x2 + x1^2 / 3", square()).unwrap();
    for x in plan(&m, 16).points {
        let (alpha, _) = koszul_at(&m, &x).unwrap();
        assert!(alpha.iter().all(|a| a.abs() < 1e-12), "{alpha:?}");
    }
}

#[test]
fn exponential_family_is_balanced_and_hessian() {
    // μ is the Hessian of e^{x₁+x₂} + F(x₁) + H(x₂) with F'' = e^f, H'' = e^h.
    for (f, h) in [("0", "0"), ("x1", "-x2^2"), ("sinh(x1)", "x2 / 2")] {
        let m = exem3_fixture(f, h, square()).unwrap();
        let p = plan(&m, 32);
        assert!(balanced_k_check(&m, &p, 1).unwrap().holds, "f={f} h={h}");
        assert!(!balanced_k_check(&m, &p, 2).unwrap().holds);
        assert!(hessian_check(&m, &p).unwrap().holds);
        let fd = FiniteDifferenceOnly(m.clone());
        let r = balanced_k_check(&fd, &p, 1).unwrap();
        assert!(r.holds && r.tolerance == 1e-4, "{r:?}");
    }
}

#[test]
fn ricci_quadratic_requires_a_hessian_metric() {
    let m = pluriclosed_negative_control(square()).unwrap();
    assert!(!hessian_check(&m, &plan(&m, 8)).unwrap().holds);
    let err = ricci_quadratic_at(&m, &[0.3, 0.5], &[1.0, 0.0]).unwrap_err();
    assert!(matches!(err, ChartError::NotHessian { .. }), "{err}");
}

#[test]
fn two_dimensional_balanced_family_and_its_perturbation() {
    let m = dim2_fixture("1", "1", square()).unwrap();
    let p = plan(&m, 32);
    assert!(balanced_k_check(&m, &p, 1).unwrap().holds);
    let perturbed = ExprMetric::parse(&["1 + exp(x1 + x2) + x2", "exp(x1 + x2)", "1 + exp(x1 + x2)"], square()).unwrap();
    let r = balanced_k_check(&perturbed, &p, 1).unwrap();
    assert!(!r.holds && r.max_residual > 0.1, "{r:?}");
    assert!(dim2_fixture("x2", "1", square()).is_err());
}

#[test]
fn diagonal_family_is_balanced_at_its_level() {
    let m = dimn_fixture(&["1 + x2^2", "1 + x1^2"], 2, square()).unwrap();
    let x = [0.3, -0.7];
    let g = m.eval(&x);
    let (f1, f2) = (1.0 + x[1] * x[1], 1.0 + x[0] * x[0]);
    assert!((g.get(0, 0) - (f1 * f2).powi(2) / f1.powi(3)).abs() < 1e-14);
    assert!((g.get(1, 1) - (f1 * f2).powi(2) / f2.powi(3)).abs() < 1e-14);
    let p = plan(&m, 32);
    assert!(balanced_k_check(&m, &p, 2).unwrap().holds);
    assert!(!balanced_k_check(&m, &p, 1).unwrap().holds);
    assert!(!balanced_k_check(&m, &p, 3).unwrap().holds);

    let m3 = dimn_fixture(&["exp(x2)", "2 + x3^2", "cosh(x1 - x2)"], 1, BoxDomain::cube(3, -1.0, 1.0)).unwrap();
    let p3 = plan(&m3, 16);
    assert!(balanced_k_check(&m3, &p3, 1).unwrap().holds);
    assert!(!balanced_k_check(&m3, &p3, 2).unwrap().holds);
    assert!(dimn_fixture(&["x1", "1"], 1, square()).is_err());
}

#[test]
fn diagonal_product_without_the_level_power_is_not_balanced() {
    // μ_j = f₁f₂ / f_j³: the level-2 exponent on the denominator alone.
    let m = ExprMetric::parse(&["(1 + x2^2) * (1 + x1^2) / (1 + x2^2)^3", "0", "(1 + x2^2) * (1 + x1^2) / (1 + x1^2)^3"], square()).unwrap();
    let p = plan(&m, 32);
    for k in 1..=4 {
        assert!(!balanced_k_check(&m, &p, k).unwrap().holds, "k={k}");
    }
}

#[test]
fn diagonal_exponential_metrics_are_pluriclosed() {
    for fs in [vec!["x1", "x2^2"], vec!["sinh(x1)", "-x2", "x3^3 / 3"], vec!["0", "x2", "2 * x3", "x4^2"]] {
        let n = fs.len();
        let m = cop1_fixture(&fs, BoxDomain::cube(n, -1.0, 1.0)).unwrap();
        let p = plan(&m, 32);
        let r = pluriclosed_check(&m, &p).unwrap();
        assert!(r.holds, "{fs:?}: {r:?}");
        assert!(pluriclosed_check(&FiniteDifferenceOnly(m.clone()), &p).unwrap().holds);
    }
    assert!(cop1_fixture(&["x2", "0"], square()).is_err());
}

#[test]
fn pluriclosed_negative_control_has_residual_two() {
    let m = pluriclosed_negative_control(square()).unwrap();
    let p = plan(&m, 16);
    let r = pluriclosed_check(&m, &p).unwrap();
    assert!(!r.holds);
    assert!((r.max_residual - 2.0).abs() < 1e-12, "{r:?}");
    let fd = pluriclosed_check(&FiniteDifferenceOnly(m), &p).unwrap();
    assert!(!fd.holds && (fd.max_residual - 2.0).abs() < 1e-3, "{fd:?}");
}

#[test]
fn ricci_quadratic_matches_the_curvature_oracle() {
    let m = exemple_fixture(2, 1.0).unwrap();
    let x = [1.0, 0.0];
    let e1 = ricci_quadratic_at(&m, &x, &[1.0, 0.0]).unwrap();
    assert!(e1 >= 0.0);
    for x in [vec![1.0, 0.0], vec![0.8, -0.6], vec![1.7, 1.1]] {
        for u in [[1.0, 0.0], [0.0, 1.0], [0.6, -1.3]] {
            let fast = ricci_quadratic_at(&m, &x, &u).unwrap();
            let oracle = ricci_fd_oracle(&m, &x, &u).unwrap();
            assert!((fast - oracle).abs() < 1e-4, "x={x:?} u={u:?}: {fast} vs {oracle}");
        }
    }
    let m3 = exemple_fixture(3, 2.0).unwrap();
    let x = [0.9, 0.4, -0.5];
    let u = [0.3, 1.0, -0.2];
    let fast = ricci_quadratic_at(&m3, &x, &u).unwrap();
    assert!((fast - ricci_fd_oracle(&m3, &x, &u).unwrap()).abs() < 1e-4);
}

#[test]
fn finite_differences_converge_at_second_order() {
    let m = FiniteDifferenceOnly(exem3_fixture("x1^3", "sinh(x2)", square()).unwrap());
    let rich = richardson_koszul(&m, &[0.4, -0.3], 1000.0).unwrap();
    assert!(rich.diffs[1] < rich.diffs[0] / 2.0, "{rich:?}");
    assert!((rich.order - 2.0).abs() < 0.3, "{rich:?}");
}

#[test]
fn reports_are_deterministic_and_name_the_worst_point() {
    let m = pluriclosed_negative_control(square()).unwrap();
    let p = plan(&m, 16);
    let a = hessian_check(&m, &p).unwrap();
    let b = hessian_check(&m, &p).unwrap();
    assert_eq!(a, b);
    assert!(p.points.contains(&a.argmax));
    assert_eq!(a.samples, 16);
}

#[test]
fn non_positive_metrics_are_reported() {
    let m = dim2_fixture("0", "0", square()).unwrap();
    let err = balanced_k_check(&m, &plan(&m, 4), 1).unwrap_err();
    assert!(matches!(err, ChartError::NotPositiveDefinite { .. }), "{err}");
}

