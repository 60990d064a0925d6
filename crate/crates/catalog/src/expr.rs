//! Arithmetic over named variables for table templates and row constraints.
//!
//! Grammar: numbers (integers or decimals), identifiers, `+ - * /`, integer
//! powers `x^k`, `sqrt(·)` and parentheses. `^` binds tighter than unary minus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use gkforge_core::scalar::{parse_rational, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{CatalogError, Result};

/// Scalars the evaluator can take square roots in.
pub trait Field: Scalar {
    /// `None` when the radicand is negative or, for rationals, not a square.
    fn sqrt(&self) -> Option<Self>;
}

impl Field for Rational {
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let root = |n: &BigInt| {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        };
        Some(Rational::new(root(self.numer())?, root(self.denom())?))
    }
}

impl Field for f64 {
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let mut p = Parser { src: text, chars: text.char_indices().collect(), pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn has_sqrt(&self) -> bool {
        match self {
            Expr::Sqrt(_) => true,
            Expr::Num(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_sqrt(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.has_sqrt() || b.has_sqrt(),
        }
    }

    pub fn eval<S: Field>(&self, env: &BTreeMap<String, S>) -> Result<S> {
        let err = |m: String| CatalogError::Eval(format!("{m} in `{self}`"));
        Ok(match self {
            Expr::Num(q) => S::from_rational(q),
            Expr::Var(v) => env.get(v).cloned().ok_or_else(|| err(format!("unbound variable {v}")))?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + &b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - &b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * &b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_exact_zero() {
                    return Err(err("division by zero".into()));
                }
                a.eval(env)? / &d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(env)?;
                if *k < 0 && base.is_exact_zero() {
                    return Err(err("division by zero".into()));
                }
                let mut acc = S::one();
                for _ in 0..k.unsigned_abs() {
                    acc = acc * &base;
                }
                if *k < 0 {
                    acc.recip()
                } else {
                    acc
                }
            }
            Expr::Sqrt(a) => {
                let x = a.eval(env)?;
                x.sqrt().ok_or_else(|| err(format!("no {} square root of {x}", S::FIELD)))?
            }
        })
    }

    /// Coefficients of a linear form in `basis`, e.g. `(1+a)*e2 - e3`.
    pub fn linear_coefficients(&self, basis: &[&str], params: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
        let at = |values: &[i64]| {
            let mut env = params.clone();
            for (b, v) in basis.iter().zip(values) {
                env.insert(b.to_string(), Rational::from_integer(BigInt::from(*v)));
            }
            self.eval(&env)
        };
        let n = basis.len();
        let origin = at(&vec![0; n])?;
        let coeffs: Vec<Rational> = (0..n)
            .map(|i| {
                let mut unit = vec![0; n];
                unit[i] = 1;
                at(&unit).map(|v| v - &origin)
            })
            .collect::<Result<_>>()?;
        // A homogeneous linear form vanishes at 0 and is additive at a generic point.
        let probe: Vec<i64> = (0..n as i64).map(|i| 2 * i + 3).collect();
        let expected: Rational = coeffs.iter().zip(&probe).map(|(c, &p)| c.clone() * Rational::from_integer(p.into())).sum();
        if !origin.is_zero() || at(&probe)? != expected {
            return Err(CatalogError::Data(format!("`{self}` is not linear in {}", basis.join(","))));
        }
        Ok(coeffs)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> CatalogError {
        let col = self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i) + 1;
        CatalogError::Data(format!("{what} at column {col} of `{}`", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let k = self.integer()?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        text.parse().map_err(|_| self.error("expected an integer exponent"))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit() || *c == '.') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                parse_rational(&text).map(Expr::Num).map_err(|_| self.error("malformed number"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_alphanumeric() || *c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                if name == "sqrt" {
                    if !self.eat('(') {
                        return Err(self.error("expected `(` after sqrt"));
                    }
                    let e = self.sum()?;
                    if !self.eat(')') {
                        return Err(self.error("expected `)`"));
                    }
                    return Ok(Expr::Sqrt(Box::new(e)));
                }
                Ok(Expr::Var(name))
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}
