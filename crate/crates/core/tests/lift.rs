mod common;

use common::{book, hyperbolic, instance, random_instance, rng};
use gkforge_core::lift::{iterate_lift, DEFAULT_DIM_CAP};
use gkforge_core::scalar::{q, qi};
use gkforge_core::{Error, Matrix, Metric};

#[test]
fn recursion_identities_hold_on_random_instances() {
    let mut rng = rng(11);
    for _ in 0..3 {
        let base = random_instance(&mut rng);
        for level in iterate_lift(&base, 3, DEFAULT_DIM_CAP).unwrap() {
            assert_eq!(level.recursion_defect(&base), None, "level {}", level.level);
        }
    }
}

// Trace values below were cross-checked with an independent symbolic computation.
#[test]
fn hyperbolic_example_traces_are_in_ratio_one_third() {
    let g = Matrix::from_rows(vec![vec![qi(1), qi(1), qi(0)], vec![qi(1), qi(3), qi(1)], vec![qi(0), qi(1), qi(1)]]);
    let base = instance(hyperbolic(qi(1)), Metric::new(g).unwrap());
    let dt = base.difference();
    assert_eq!(dt.tr_gamma(), [qi(-2), qi(1), qi(-1)]);
    assert_eq!(dt.tr_gamma_star(), [qi(-6), qi(3), qi(-3)]);
    // tr γ* = 3 tr γ, so no level satisfies tr γ = (2^k − 1) tr γ*.
    let levels = iterate_lift(&base, 3, DEFAULT_DIM_CAP).unwrap();
    assert!(levels.iter().all(|l| !l.is_balanced()));
    assert!(!levels[1].structure.ricci_bismut().is_zero(0.0));
}

#[test]
fn book_example_traces_are_in_ratio_one_fifteenth() {
    let base = instance(book(q(8, 3)), Metric::identity(3));
    let dt = base.difference();
    assert_eq!(dt.tr_gamma(), [q(-2, 3), qi(0), qi(0)]);
    assert_eq!(dt.tr_gamma_star(), [qi(-10), qi(0), qi(0)]);
    let levels = iterate_lift(&base, 4, DEFAULT_DIM_CAP).unwrap();
    assert!(levels.iter().all(|l| !l.is_balanced()));
}

#[test]
fn flat_kahler_instance_stays_balanced() {
    let abelian = gkforge_core::validate_algebra(gkforge_core::Bilinear::zeros(2)).unwrap();
    let base = instance(abelian, Metric::identity(2));
    for level in iterate_lift(&base, 3, DEFAULT_DIM_CAP).unwrap() {
        assert!(level.is_balanced());
        assert!(level.report.kahler.holds);
    }
}

#[test]
fn resource_cap_is_enforced() {
    let base = instance(book(qi(1)), Metric::identity(3));
    assert_eq!(iterate_lift(&base, 5, 64).unwrap_err(), Error::ResourceCap { dim: 96, cap: 64 });
}
