//! Scalar backends shared by every container in the crate.
//!
//! Two backends implement [`Scalar`]: arbitrary-precision rationals, where
//! equality is exact, and `f64`, where equality means `|x| <= tol`.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Default tolerance for float-backend equality tests.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar:
    Sized
    + Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + Neg<Output = Self>
{
    /// True for the rational backend.
    const EXACT: bool;
    /// Backend name as used in the JSON schemas.
    const FIELD: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_finite(&self) -> bool;

    /// Exact zero test on rationals, `|x| <= tol` on floats.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Strict positivity; floats must exceed `tol`.
    fn is_positive(&self, tol: f64) -> bool;

    /// Literal zero, independent of tolerance. Used to skip work in sparse loops.
    fn is_exact_zero(&self) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Parses `"p/q"`, an integer, or a decimal literal.
    fn parse(text: &str) -> Result<Self, Error> {
        parse_rational(text).map(|q| Self::from_rational(&q))
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn recip(&self) -> Self {
        Self::one() / self
    }

    fn scale_i64(&self, k: i64) -> Self {
        self.clone() * &Self::from_i64(k)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const FIELD: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self, _tol: f64) -> bool {
        Signed::is_positive(self)
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const FIELD: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn is_positive(&self, tol: f64) -> bool {
        *self > tol
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Parses `"p/q"`, `"-7"`, or a finite decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Ok(n) = BigInt::from_str(text) {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(text).ok_or_else(bad)
}

/// `[-]digits[.digits][e[±]digits]` as an exact rational.
fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(p) => (&text[..p], text[p + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let (neg, int) = match int.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, int.strip_prefix('+').unwrap_or(int)),
    };
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("{int}{frac}")).ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if shift >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, shift.unsigned_abs() as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

/// Exact binary value of a finite float.
pub fn rational_from_f64(value: f64) -> Option<Rational> {
    Rational::from_float(value)
}

/// Formats a rational as `"p/q"` or `"p"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Shorthand for small rational literals.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for integer rationals.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_canonicalizes_sign() {
        let x = parse_rational("3/-6").unwrap();
        assert_eq!(x, q(-1, 2));
        assert_eq!(format_rational(&x), "-1/2");
        assert!(x.denom() > &BigInt::from(0));
    }

    #[test]
    fn parses_integers_and_decimals_exactly() {
        assert_eq!(parse_rational("-7").unwrap(), qi(-7));
        assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("3e2").unwrap(), qi(300));
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn float_negligibility_uses_tolerance() {
        assert!(1e-12_f64.is_negligible(1e-9));
        assert!(!1e-6_f64.is_negligible(1e-9));
        assert!(!<f64 as Scalar>::is_finite(&f64::NAN));
    }

    #[test]
    fn rational_comparisons_are_exact() {
        let tiny = q(1, 1_000_000_000) * &q(1, 1_000_000_000);
        assert!(!tiny.is_negligible(1.0));
        assert!(Scalar::is_positive(&tiny, 1.0));
    }
}
