//! Sparse multivariate polynomials over the rationals and a small solver for
//! low-degree systems that returns rational sample points of the solution set.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero as _};

use crate::scalar::{Rational, Scalar};

/// `Σ c_m x^m` keyed by exponent vectors of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(<Rational as Scalar>::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * s);
        }
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, ca.clone() * cb);
            }
        }
        p
    }

    fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(self.nvars, Rational::one()), |acc, _| acc.mul(self))
    }

    /// Replaces `x_i` by `value`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[i];
            rest[i] = 0;
            let mut mono = Poly::zero(self.nvars);
            mono.add_term(rest, c.clone());
            out = out.add(&mono.mul(&value.pow(k)));
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = <Rational as Scalar>::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    term *= xi;
                }
            }
            acc += &term;
        }
        acc
    }

    /// Nonzero constant term of a polynomial with no variables.
    fn nonzero_constant(&self) -> bool {
        !self.terms.is_empty() && self.vars().is_empty()
    }

    /// Coefficient of `x_i^k` when the polynomial is univariate in `x_i`.
    fn univariate_coeff(&self, i: usize, k: u32) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e[i] == k && e.iter().enumerate().all(|(j, &p)| j == i || p == 0))
            .map_or_else(<Rational as Scalar>::zero, |(_, c)| c.clone())
    }

    /// For a degree-one polynomial, `(i, expression for x_i)` solving `p = 0`.
    fn solve_linear(&self) -> Option<(usize, Poly)> {
        if self.degree() != 1 {
            return None;
        }
        let i = *self.vars().first()?;
        let mut unit = vec![0; self.nvars];
        unit[i] = 1;
        let c = self.terms.get(&unit)?.clone();
        let rest = self.sub(&Poly::var(self.nvars, i).scale(&c));
        Some((i, rest.scale(&(-Rational::one() / c))))
    }
}

/// Rational roots of `a x² + b x + c` (or of `b x + c` when `a = 0`).
pub fn rational_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<Rational> {
    if a.is_zero() {
        return if b.is_zero() { vec![] } else { vec![-(c.clone() / b)] };
    }
    let disc = b.clone() * b - &(a.clone() * c * &Rational::from_i64(4));
    if disc.is_negative() {
        return vec![];
    }
    let Some(root) = rational_sqrt(&disc) else { return vec![] };
    let two_a = a.clone() * &Rational::from_i64(2);
    let mut roots = vec![(-b.clone() - &root) / &two_a, (-b.clone() + &root) / &two_a];
    roots.dedup();
    roots
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let sqrt_int = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(sqrt_int(q.numer())?, sqrt_int(q.denom())?))
}

/// Rational points of `{eqs = 0}`. Linear equations are eliminated first,
/// monomials branch on each of their variables vanishing, univariate
/// quadratics branch on their rational roots, and when none
/// applies the lowest-index remaining variable is fixed at each value in
/// `samples`. Free variables left at the end take `samples[0]`.
pub fn solve(eqs: &[Poly], samples: &[Rational]) -> Vec<Vec<Rational>> {
    let nvars = eqs.first().map_or(0, Poly::nvars);
    let mut out = Vec::new();
    let bindings: Vec<Option<Poly>> = vec![None; nvars];
    solve_rec(eqs.to_vec(), bindings, samples, &mut out);
    out.sort();
    out.dedup();
    out
}

fn bind(eqs: &[Poly], bindings: &[Option<Poly>], i: usize, value: Poly) -> (Vec<Poly>, Vec<Option<Poly>>) {
    let eqs = eqs.iter().map(|p| p.substitute(i, &value)).filter(|p| !p.is_zero()).collect();
    let mut bindings: Vec<Option<Poly>> =
        bindings.iter().map(|b| b.as_ref().map(|p| p.substitute(i, &value))).collect();
    bindings[i] = Some(value);
    (eqs, bindings)
}

fn solve_rec(eqs: Vec<Poly>, bindings: Vec<Option<Poly>>, samples: &[Rational], out: &mut Vec<Vec<Rational>>) {
    let eqs: Vec<Poly> = eqs.into_iter().filter(|p| !p.is_zero()).collect();
    if eqs.iter().any(Poly::nonzero_constant) {
        return;
    }
    if let Some((i, expr)) = eqs.iter().find_map(Poly::solve_linear) {
        let (eqs, bindings) = bind(&eqs, &bindings, i, expr);
        return solve_rec(eqs, bindings, samples, out);
    }
    // A single monomial vanishes only when one of its variables does.
    if let Some(p) = eqs.iter().find(|p| p.terms.len() == 1) {
        let nvars = bindings.len();
        for i in p.vars() {
            let (eqs, bindings) = bind(&eqs, &bindings, i, Poly::zero(nvars));
            solve_rec(eqs, bindings, samples, out);
        }
        return;
    }
    if let Some(p) = eqs.iter().find(|p| p.vars().len() == 1 && p.degree() == 2) {
        let i = p.vars()[0];
        for root in rational_roots(&p.univariate_coeff(i, 2), &p.univariate_coeff(i, 1), &p.univariate_coeff(i, 0)) {
            let (eqs, bindings) = bind(&eqs, &bindings, i, Poly::constant(p.nvars(), root));
            solve_rec(eqs, bindings, samples, out);
        }
        return;
    }
    let nvars = bindings.len();
    let next = eqs.iter().flat_map(Poly::vars).min();
    match next {
        Some(i) => {
            for s in samples {
                let (eqs, bindings) = bind(&eqs, &bindings, i, Poly::constant(nvars, s.clone()));
                solve_rec(eqs, bindings, samples, out);
            }
        }
        None => {
            // Every remaining unbound variable is free.
            let mut bindings = bindings;
            for i in 0..nvars {
                if bindings[i].is_none() {
                    let value = Poly::constant(nvars, samples.first().cloned().unwrap_or_else(<Rational as Scalar>::zero));
                    let (_, b) = bind(&[], &bindings, i, value);
                    bindings = b;
                }
            }
            let zero = vec![<Rational as Scalar>::zero(); nvars];
            out.push(bindings.iter().map(|b| b.as_ref().expect("all bound").eval(&zero)).collect());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn circle_meets_line_at_rational_points() {
        // x² + y² = 25, x − y = 1
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let circle = x.mul(&x).add(&y.mul(&y)).sub(&Poly::constant(2, qi(25)));
        let line = x.sub(&y).sub(&Poly::constant(2, qi(1)));
        let sols = solve(&[circle, line], &[qi(1)]);
        assert_eq!(sols, vec![vec![qi(-3), qi(-4)], vec![qi(4), qi(3)]]);
    }

    #[test]
    fn hyperbola_is_sampled_along_a_free_variable() {
        // x y = 1
        let xy = Poly::var(2, 0).mul(&Poly::var(2, 1)).sub(&Poly::constant(2, qi(1)));
        let sols = solve(&[xy], &[qi(2), q(1, 3)]);
        assert_eq!(sols, vec![vec![q(1, 3), qi(3)], vec![qi(2), q(1, 2)]]);
    }

    #[test]
    fn monomial_equations_branch_on_zero_factors() {
        // x y = 0, y + x = 1
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let eqs = [x.mul(&y), x.add(&y).sub(&Poly::constant(2, qi(1)))];
        assert_eq!(solve(&eqs, &[qi(5)]), vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
    }

    #[test]
    fn irrational_roots_are_skipped() {
        assert!(rational_roots(&qi(1), &qi(0), &qi(-2)).is_empty());
        assert_eq!(rational_roots(&qi(4), &qi(0), &qi(-1)), vec![q(-1, 2), q(1, 2)]);
    }
}
