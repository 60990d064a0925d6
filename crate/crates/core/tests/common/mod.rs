//! Small left-symmetric families and random instances for the core suites.

#![allow(dead_code)]

use gkforge_core::random::{random_invertible, random_metric, rational_in};
use gkforge_core::scalar::{q, qi, Rational};
use gkforge_core::{product_from_entries, validate_algebra, AffineRiemann, Algebra, Metric};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn algebra(n: usize, entries: &[(usize, usize, Vec<Rational>)]) -> Algebra<Rational> {
    validate_algebra(product_from_entries(n, entries)).unwrap()
}

/// e1•e1=ae1, e1•e2=ae2+e3, e1•e3=e2+ae3, e2•e1=ae2, e3•e1=ae3.
pub fn hyperbolic(a: Rational) -> Algebra<Rational> {
    let z = || qi(0);
    algebra(
        3,
        &[
            (0, 0, vec![a.clone(), z(), z()]),
            (0, 1, vec![z(), a.clone(), qi(1)]),
            (0, 2, vec![z(), qi(1), a.clone()]),
            (1, 0, vec![z(), a.clone(), z()]),
            (2, 0, vec![z(), z(), a]),
        ],
    )
}

/// e1•e1=ae1, e1•e2=(1+a)e2, e1•e3=(1+a)e3, e2•e1=ae2, e3•e1=ae3.
pub fn book(a: Rational) -> Algebra<Rational> {
    let z = || qi(0);
    let b = a.clone() + qi(1);
    algebra(
        3,
        &[
            (0, 0, vec![a.clone(), z(), z()]),
            (0, 1, vec![z(), b.clone(), z()]),
            (0, 2, vec![z(), z(), b]),
            (1, 0, vec![z(), a.clone(), z()]),
            (2, 0, vec![z(), z(), a]),
        ],
    )
}

/// e1•e2 = ½e3, e2•e1 = −½e3.
pub fn heisenberg() -> Algebra<Rational> {
    let z = || qi(0);
    algebra(3, &[(0, 1, vec![z(), z(), q(1, 2)]), (1, 0, vec![z(), z(), q(-1, 2)])])
}

/// e1•e1=e3, e1•e2=e1, e2•e1=e1−e3, e2•e2=e2, e2•e3=e3, e3•e2=e3.
pub fn non_nilpotent() -> Algebra<Rational> {
    let z = || qi(0);
    algebra(
        3,
        &[
            (0, 0, vec![z(), z(), qi(1)]),
            (0, 1, vec![qi(1), z(), z()]),
            (1, 0, vec![qi(1), z(), qi(-1)]),
            (1, 1, vec![z(), qi(1), z()]),
            (1, 2, vec![z(), z(), qi(1)]),
            (2, 1, vec![z(), z(), qi(1)]),
        ],
    )
}

/// e1•e1 = e2 on ℝ².
pub fn plane() -> Algebra<Rational> {
    algebra(2, &[(0, 0, vec![qi(0), qi(1)])])
}

/// A random 3-dimensional instance: a family member in a random basis with a random metric.
pub fn random_instance<R: Rng>(rng: &mut R) -> AffineRiemann<Rational> {
    let a = rational_in(rng, -2, 2, 3);
    let alg = match rng.gen_range(0..4) {
        0 => hyperbolic(a),
        1 => book(a),
        2 => heisenberg(),
        _ => non_nilpotent(),
    };
    let p = random_invertible(rng, 3);
    let alg = alg.change_basis(&p).unwrap();
    AffineRiemann::new(alg, random_metric(rng, 3)).unwrap()
}

pub fn instance(alg: Algebra<Rational>, g: Metric<Rational>) -> AffineRiemann<Rational> {
    AffineRiemann::new(alg, g).unwrap()
}

/// e1•e1=ae1, e1•e2=ae2+e3, e1•e3=−e2+ae3, e2•e1=ae2, e3•e1=ae3.
pub fn elliptic(a: Rational) -> Algebra<Rational> {
    let z = || qi(0);
    algebra(
        3,
        &[
            (0, 0, vec![a.clone(), z(), z()]),
            (0, 1, vec![z(), a.clone(), qi(1)]),
            (0, 2, vec![z(), qi(-1), a.clone()]),
            (1, 0, vec![z(), a.clone(), z()]),
            (2, 0, vec![z(), z(), a]),
        ],
    )
}

pub fn metric(upper: &[Rational]) -> Metric<Rational> {
    Metric::from_upper_triangle(3, upper).unwrap()
}
