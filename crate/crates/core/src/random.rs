//! Deterministic random rational data for property checks and sampling.

use num_bigint::BigInt;
use rand::Rng;

use crate::linalg::Matrix;
use crate::metric::Metric;
use crate::scalar::{Rational, Scalar};

/// Uniform rational `k / den` with `k` in `lo*den ..= hi*den`.
pub fn rational_in<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    let k = rng.gen_range(lo * den..=hi * den);
    Rational::new(BigInt::from(k), BigInt::from(den))
}

/// Random positive-definite rational metric `AᵀA + I` with small entries in `A`.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Metric<Rational> {
    let a = Matrix::from_fn(n, n, |_, _| rational_in(rng, -1, 1, 2));
    let g = a.transpose().mul(&a).add(&Matrix::identity(n));
    Metric::new(g).expect("AᵀA + I is positive definite")
}

/// Random invertible rational matrix: unit lower times unit upper triangular,
/// times a positive diagonal, so the determinant never vanishes.
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<Rational> {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => rational_in(rng, -1, 1, 2),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => Rational::zero(),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => rational_in(rng, -1, 1, 2),
        std::cmp::Ordering::Equal => Rational::new(BigInt::from(rng.gen_range(1..=3)), BigInt::from(1)),
        std::cmp::Ordering::Greater => Rational::zero(),
    });
    lower.mul(&upper)
}

/// Random vector with entries `k/2`, `|k| ≤ 4`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational_in(rng, -2, 2, 2)).collect()
}
