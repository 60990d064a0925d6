//! Acceptance suite: nine criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_RED` fail for reasons recorded next to them; the
//! run exits non-zero only when a criterion's outcome differs from that list,
//! so a known-red criterion that starts passing is reported too.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gkforge_catalog::{entries, instantiate, named_fixtures, reproduce_tables, rows, FixturesReport, RowStatus};
use gkforge_chart::checks::{determinant_check, ricci_nonnegative_check, trace_gamma_check};
use gkforge_chart::fixtures::{cop1_fixture, exemple_fixture, pluriclosed_negative_control};
use gkforge_chart::{hessian_check, pluriclosed_check, BoxDomain, ChartMetric, SamplePlan};
use gkforge_core::hermitian::{
    bismut_closed_form, bismut_curvature_closed_form, canonical_connections_direct, chern_closed_form,
    chern_curvature_closed_form, lee_form_direct, pluriclosed_block_defect, pluriclosed_direct, pluriclosed_residual,
};
use gkforge_core::invariants::check_all;
use gkforge_core::lift::{iterate_lift, DEFAULT_DIM_CAP};
use gkforge_core::random::{random_invertible, random_metric, rational_in};
use gkforge_core::scalar::{qi, Rational};
use gkforge_core::{phase, AffineRiemann};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason.
const KNOWN_RED: [(u32, &str); 2] = [
    (5, "the lifted examples have tr γ* = 3 tr γ and tr γ* = 15 tr γ, so no level is balanced"),
    (6, "row 3.2 admits no positive definite Kähler metric; every sample fails"),
];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

/// A Novikov algebra from the catalog at random parameters, written in a
/// random basis, with a random metric.
fn random_instance(rng: &mut ChaCha8Rng) -> AffineRiemann<Rational> {
    let all = entries();
    let e = &all[rng.gen_range(0..all.len())];
    let params: BTreeMap<String, Rational> = e.params.iter().map(|p| (p.clone(), rational_in(rng, -2, 2, 3))).collect();
    let alg = instantiate(e, &params).expect("catalog entry instantiates");
    let alg = alg.change_basis(&random_invertible(rng, 3)).expect("invertible basis change");
    AffineRiemann::new(alg, random_metric(rng, 3)).expect("valid instance")
}

fn instances(seed: u64, count: usize) -> Vec<AffineRiemann<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.1?}, limit {limit:?}"))
    }
}

fn lee_form_oracle() -> Verdict {
    let start = Instant::now();
    for (i, ar) in instances(101, 25).iter().enumerate() {
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let dt = ar.difference();
        let mut expected: Vec<Rational> = dt.alpha().iter().zip(dt.xi()).map(|(a, x)| a.clone() - x).collect();
        expected.extend(std::iter::repeat(qi(0)).take(ar.dim()));
        if lee_form_direct(&ps) != expected {
            return verdict(false, format!("instance {i}: direct Lee form differs from (α − ξ, 0)"));
        }
    }
    match within(start.elapsed(), Duration::from_secs(5)) {
        Ok(()) => verdict(true, "25 instances, Lee form on the phase algebra is (α − ξ, 0)"),
        Err(e) => verdict(false, e),
    }
}

fn lift_recursion() -> Verdict {
    let start = Instant::now();
    for (i, ar) in instances(202, 10).iter().enumerate() {
        let base = ar.difference();
        let levels = match iterate_lift(ar, 3, DEFAULT_DIM_CAP) {
            Ok(l) => l,
            Err(e) => return verdict(false, format!("instance {i}: {e}")),
        };
        for l in &levels {
            let scale = qi(1 << l.level);
            let pad = |v: Vec<Rational>| {
                let mut v = v;
                v.resize(l.dim(), qi(0));
                v
            };
            let alpha = pad(base.alpha().iter().map(|a| a.clone() * &scale).collect());
            let theta = pad(base.alpha().iter().zip(base.xi()).map(|(a, x)| a.clone() * &(scale.clone() - qi(1)) - x).collect());
            let dt = l.structure.difference();
            let xi_expected: Vec<Rational> = l.theta.iter().map(|t| -t.clone()).collect();
            if dt.alpha() != &alpha[..] || l.theta != theta || dt.xi() != &xi_expected[..] {
                return verdict(false, format!("instance {i}, level {}: Koszul forms differ from the closed forms", l.level));
            }
        }
    }
    match within(start.elapsed(), Duration::from_secs(60)) {
        Ok(()) => verdict(true, "10 instances, levels 1..=3 (dimension up to 24): α_k, ξ_k, θ_k match"),
        Err(e) => verdict(false, e),
    }
}

fn pluriclosed_oracle() -> Verdict {
    let mut pluriclosed = 0;
    for (i, ar) in instances(303, 25).iter().enumerate() {
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let (form, holds) = pluriclosed_direct(&ps);
        let reduced = pluriclosed_residual(ar).first_nonzero(0.0).is_none();
        if holds != reduced {
            return verdict(false, format!("instance {i}: dJdω = 0 is {holds} but the reduced residual vanishing is {reduced}"));
        }
        if let Some(t) = pluriclosed_block_defect(ar, &form) {
            return verdict(false, format!("instance {i}: block mismatch at {t:?}"));
        }
        pluriclosed += holds as usize;
    }
    verdict(true, format!("25 instances ({pluriclosed} pluriclosed): iff and (h,h,v,v) block = 2 × residual"))
}

fn bismut_chern_oracle() -> Verdict {
    for (i, ar) in instances(404, 10).iter().enumerate() {
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let cc = canonical_connections_direct(&ps);
        let checks = [
            ("bismut", cc.bismut.sub(&bismut_closed_form(ar)).first_nonzero(0.0).is_none()),
            ("chern", cc.chern.sub(&chern_closed_form(ar)).first_nonzero(0.0).is_none()),
            ("bismut curvature", cc.bismut_curvature.sub(&bismut_curvature_closed_form(ar)).first_nonzero(0.0).is_none()),
            ("chern curvature", cc.chern_curvature.sub(&chern_curvature_closed_form(ar)).first_nonzero(0.0).is_none()),
            ("bismut ricci", cc.bismut_ricci == ar.ricci_bismut().to_phase_matrix()),
            ("chern ricci", cc.chern_ricci == ar.ricci_chern().to_phase_matrix()),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return verdict(false, format!("instance {i}: {name} differs from its closed form"));
        }
    }
    verdict(true, "10 instances: connections, curvatures and Ricci forms match blockwise")
}

fn failing_checks(report: &FixturesReport, name: &str) -> Vec<String> {
    report
        .fixture(name)
        .map(|f| f.checks.iter().filter(|c| !c.passed).map(|c| format!("{name}.{}: {}", c.name, c.observed)).collect())
        .unwrap_or_else(|| vec![format!("{name}: missing")])
}

fn lifted_examples() -> Verdict {
    let report = &named_fixtures();
    let failures: Vec<String> =
        ["lifted_hyperbolic", "lifted_book"].iter().flat_map(|n| failing_checks(report, n)).collect();
    if failures.is_empty() {
        verdict(true, "hyperbolic example balanced at level 2 only with CYT level 3; book example at level 4 only")
    } else {
        verdict(false, failures.join("; "))
    }
}

fn table_reproduction() -> Verdict {
    let start = Instant::now();
    let report = reproduce_tables(&[3, 4, 5, 6, 7, 8], 10, 42);
    let mut bad = Vec::new();
    for r in &report.rows {
        let review_allowed = rows().iter().any(|row| row.id == r.id && row.review.is_some());
        let ok = r.status == RowStatus::Pass || (r.status == RowStatus::Review && review_allowed);
        if !ok {
            bad.push(format!("{} {:?}", r.id, r.status));
        }
    }
    let s = &report.summary;
    let counts = format!("pass {}, review {}, fail {}, unsampleable {}", s.pass, s.review, s.fail, s.unsampleable);
    if let Err(e) = within(start.elapsed(), Duration::from_secs(300)) {
        bad.push(e);
    }
    if bad.is_empty() {
        verdict(true, format!("{} rows: {counts}", report.rows.len()))
    } else {
        verdict(false, format!("{counts}; {}", bad.join(", ")))
    }
}

fn rigid_fixtures() -> Verdict {
    let report = &named_fixtures();
    let failures: Vec<String> = ["rigid_family", "line_times_sphere", "symmetric_matrices"]
        .iter()
        .flat_map(|n| failing_checks(report, n))
        .collect();
    if failures.is_empty() {
        verdict(true, "rigid family rigid and balanced at the tuned levels; candidates of dimension 4 filter correctly; symmetric-matrix identities hold")
    } else {
        verdict(false, failures.join("; "))
    }
}

fn chart_engine() -> Verdict {
    let plan = |m: &dyn ChartMetric, count: usize| SamplePlan::halton(m.domain(), count, 42).unwrap();
    for n in [2, 3, 4] {
        for c in [0.5, 1.0, 2.0] {
            let m = exemple_fixture(n, c).unwrap();
            let p = plan(&m, 64);
            let results = [
                determinant_check(&m, &p.clone().with_tolerance(1e-9), 1.0),
                hessian_check(&m, &p.clone().with_tolerance(1e-7)),
                trace_gamma_check(&m, &p.clone().with_tolerance(1e-6)),
                ricci_nonnegative_check(&m, &p.clone().with_tolerance(1e-7)),
            ];
            for r in results {
                match r {
                    Ok(r) if r.holds => {}
                    Ok(r) => return verdict(false, format!("n={n} c={c}: {} residual {:e} at {:?}", r.check, r.max_residual, r.argmax)),
                    Err(e) => return verdict(false, format!("n={n} c={c}: {e}")),
                }
            }
        }
    }
    for fs in [vec!["x1", "x2^2"], vec!["sinh(x1)", "-x2", "x3^3 / 3"], vec!["0", "x2", "2 * x3", "x4^2"]] {
        let m = cop1_fixture(&fs, BoxDomain::cube(fs.len(), -1.0, 1.0)).unwrap();
        match pluriclosed_check(&m, &plan(&m, 32)) {
            Ok(r) if r.holds => {}
            other => return verdict(false, format!("diagonal exponential {fs:?}: {other:?}")),
        }
    }
    let neg = pluriclosed_negative_control(BoxDomain::cube(2, -1.0, 1.0)).unwrap();
    match pluriclosed_check(&neg, &plan(&neg, 16)) {
        Ok(r) if !r.holds && (r.max_residual - 2.0).abs() < 1e-6 => verdict(
            true,
            format!("radial family n∈{{2,3,4}}, c∈{{1/2,1,2}} at 64 points; diagonal exponentials pluriclosed; control residual {:.6}", r.max_residual),
        ),
        other => verdict(false, format!("negative control: {other:?}")),
    }
}

fn structural_invariants() -> Verdict {
    for (i, ar) in instances(909, 25).iter().enumerate() {
        match check_all(ar) {
            Ok(v) if v.is_empty() => {}
            Ok(v) => return verdict(false, format!("instance {i}: {}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))),
            Err(e) => return verdict(false, format!("instance {i}: {e}")),
        }
    }
    verdict(true, "25 instances: Jacobi, N_J, ∇J, dα, curvature and trace-derivative identities hold exactly")
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Verdict); 9] = [
        (1, "Lee-form oracle", lee_form_oracle),
        (2, "lift recursion", lift_recursion),
        (3, "pluriclosed oracle", pluriclosed_oracle),
        (4, "Bismut/Chern oracle", bismut_chern_oracle),
        (5, "lifted balanced examples", lifted_examples),
        (6, "table reproduction", table_reproduction),
        (7, "rigid fixtures", rigid_fixtures),
        (8, "chart engine", chart_engine),
        (9, "structural invariants", structural_invariants),
    ];
    let mut surprises = Vec::new();
    for (id, name, run) in &criteria {
        let start = Instant::now();
        let v = run();
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id} ({name}) [{:.1?}]: {}", start.elapsed(), v.detail);
        let known = KNOWN_RED.iter().find(|(k, _)| k == id);
        if let Some((_, why)) = known {
            println!("     known red: {why}");
        }
        if v.passed == known.is_some() {
            surprises.push(*id);
        }
    }
    if surprises.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("criteria differing from the known-red list: {surprises:?}");
        ExitCode::FAILURE
    }
}
