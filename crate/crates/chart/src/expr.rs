//! Minimal expression language for metric entries: numbers, variables
//! `x1..xn`, `+ - * / ^`, and the functions `exp`, `cosh`, `sinh`, `sqrt`, `ln`.
//!
//! Expressions differentiate symbolically, so metrics given as formulas get
//! analytic derivatives. `^` is right-associative and binds tighter than
//! unary minus, so `-x1^2` is `-(x1^2)`.

use std::fmt;

use crate::error::ChartError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Cosh,
    Sinh,
    Sqrt,
    Ln,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "cosh" => Func::Cosh,
            "sinh" => Func::Sinh,
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Cosh => v.cosh(),
            Func::Sinh => v.sinh(),
            Func::Sqrt => v.sqrt(),
            Func::Ln => v.ln(),
        }
    }
}

/// Expression tree; variables are 0-based (`x1` is `Var(0)`).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

use Expr::*;

// Constructors fold constants and drop additive/multiplicative identities so
// repeated differentiation stays small.
pub fn num(v: f64) -> Expr {
    Num(v)
}

pub fn var(i: usize) -> Expr {
    Var(i)
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Num(v) => Num(-v),
        Neg(inner) => *inner,
        a => Neg(Box::new(a)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Num(x), Num(y)) => Num(x + y),
        (Num(z), e) | (e, Num(z)) if z == 0.0 => e,
        (a, Neg(b)) => sub(a, *b),
        (a, b) => Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Num(x), Num(y)) => Num(x - y),
        (e, Num(z)) if z == 0.0 => e,
        (Num(z), e) if z == 0.0 => neg(e),
        (a, b) => Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Num(x), Num(y)) => Num(x * y),
        (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
        (Num(o), e) | (e, Num(o)) if o == 1.0 => e,
        (Num(m), e) | (e, Num(m)) if m == -1.0 => neg(e),
        (a, b) => Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Num(x), Num(y)) if y != 0.0 => Num(x / y),
        (Num(z), _) if z == 0.0 => Num(0.0),
        (e, Num(o)) if o == 1.0 => e,
        (a, b) => Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Num(x), Num(y)) => Num(x.powf(y)),
        (_, Num(z)) if z == 0.0 => Num(1.0),
        (e, Num(o)) if o == 1.0 => e,
        (a, b) => Pow(Box::new(a), Box::new(b)),
    }
}

pub fn call(f: Func, a: Expr) -> Expr {
    match a {
        Num(v) => Num(f.apply(v)),
        a => Call(f, Box::new(a)),
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ChartError> {
        let mut p = Parser { src: text, tokens: tokenize(text)?, pos: 0 };
        let e = p.expr()?;
        match p.peek() {
            None => Ok(e),
            Some(t) => Err(p.error(&format!("unexpected {t}"))),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Num(v) => *v,
            Var(i) => x[*i],
            Neg(a) => -a.eval(x),
            Add(a, b) => a.eval(x) + b.eval(x),
            Sub(a, b) => a.eval(x) - b.eval(x),
            Mul(a, b) => a.eval(x) * b.eval(x),
            Div(a, b) => a.eval(x) / b.eval(x),
            Pow(a, b) => {
                let base = a.eval(x);
                match **b {
                    Num(k) if k.fract() == 0.0 && k.abs() <= 64.0 => base.powi(k as i32),
                    _ => base.powf(b.eval(x)),
                }
            }
            Call(f, a) => f.apply(a.eval(x)),
        }
    }

    /// Largest variable index plus one (0 for constants).
    pub fn arity(&self) -> usize {
        match self {
            Num(_) => 0,
            Var(i) => i + 1,
            Neg(a) | Call(_, a) => a.arity(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn depends_on(&self, i: usize) -> bool {
        match self {
            Num(_) => false,
            Var(j) => *j == i,
            Neg(a) | Call(_, a) => a.depends_on(i),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => a.depends_on(i) || b.depends_on(i),
        }
    }

    fn is_constant(&self) -> bool {
        self.arity() == 0
    }

    /// Symbolic partial derivative in `x_{i+1}`.
    pub fn diff(&self, i: usize) -> Expr {
        if !self.depends_on(i) {
            return Num(0.0);
        }
        match self {
            Num(_) => Num(0.0),
            Var(j) => Num(if *j == i { 1.0 } else { 0.0 }),
            Neg(a) => neg(a.diff(i)),
            Add(a, b) => add(a.diff(i), b.diff(i)),
            Sub(a, b) => sub(a.diff(i), b.diff(i)),
            Mul(a, b) => add(mul(a.diff(i), (**b).clone()), mul((**a).clone(), b.diff(i))),
            Div(a, b) => div(
                sub(mul(a.diff(i), (**b).clone()), mul((**a).clone(), b.diff(i))),
                pow((**b).clone(), Num(2.0)),
            ),
            Pow(a, b) if b.is_constant() => {
                let k = b.eval(&[]);
                mul(mul(Num(k), pow((**a).clone(), Num(k - 1.0))), a.diff(i))
            }
            Pow(a, b) => mul(
                self.clone(),
                add(
                    mul(b.diff(i), call(Func::Ln, (**a).clone())),
                    div(mul((**b).clone(), a.diff(i)), (**a).clone()),
                ),
            ),
            Call(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Exp => call(Func::Exp, inner),
                    Func::Cosh => call(Func::Sinh, inner),
                    Func::Sinh => call(Func::Cosh, inner),
                    Func::Sqrt => div(Num(0.5), call(Func::Sqrt, inner)),
                    Func::Ln => div(Num(1.0), inner),
                };
                mul(outer, a.diff(i))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num(v) => write!(f, "{v}"),
            Var(i) => write!(f, "x{}", i + 1),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, b) => write!(f, "({a} ^ {b})"),
            Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "number {v}"),
            Token::Ident(s) => write!(f, "identifier {s:?}"),
            Token::Op(c) => write!(f, "{c:?}"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ChartError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // Exponent only when followed by a digit, so `2e` stays an error.
            if i + 1 < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if bytes[j] == b'+' || bytes[j] == b'-' {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit = &text[start..i];
            let v = lit.parse().map_err(|_| parse_error(text, start, &format!("bad number {lit:?}")))?;
            out.push((start, Token::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(parse_error(text, i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn parse_error(src: &str, at: usize, msg: &str) -> ChartError {
    ChartError::Parse(format!("{msg} at column {} in {src:?}", at + 1))
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self, msg: &str) -> ChartError {
        let at = self.tokens.get(self.pos).map_or(self.src.len(), |(p, _)| *p);
        parse_error(self.src, at, msg)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ChartError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {op:?}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ChartError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(acc, self.term()?);
            } else if self.eat('-') {
                acc = sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ChartError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(acc, self.unary()?);
            } else if self.eat('/') {
                acc = div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ChartError> {
        if self.eat('-') {
            return Ok(neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ChartError> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(pow(base, self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ChartError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of expression"));
        };
        match tok {
            Token::Num(v) => {
                self.pos += 1;
                Ok(Num(v))
            }
            Token::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    self.pos += 1;
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    return Ok(call(f, e));
                }
                let index = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| self.error(&format!("unknown identifier {name:?}")))?;
                self.pos += 1;
                Ok(Var(index - 1))
            }
            other => Err(self.error(&format!("unexpected {other}"))),
        }
    }
}
