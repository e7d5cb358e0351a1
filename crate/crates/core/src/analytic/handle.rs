//! Function handles: the small library of analytic functions scenarios are
//! built from, their expression grammar, and Taylor-model construction.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*        // '/' only by constants
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := number | variable | ('exp' | 'sin') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Arguments of `exp` and `sin` must be of the form `a*x` for a rational `a`
//! and a single variable.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::analytic::model::TaylorModel;
use crate::analytic::poly::{Poly, PolyDisplay};
use crate::analytic::polydisc::Polydisc;
use crate::error::{Error, Result};
use crate::interval::{exp_enclosure, exp_tail_upper, sin_cos_enclosure, RatInterval, DEFAULT_PRECISION_BITS};
use crate::rational::{from_f64, int, parse_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionHandle {
    Polynomial(Poly),
    Exp { var: usize, scale: Rational },
    Sin { var: usize, scale: Rational },
    Sum(Box<FunctionHandle>, Box<FunctionHandle>),
    Product(Box<FunctionHandle>, Box<FunctionHandle>),
    Scaled(Rational, Box<FunctionHandle>),
}

impl FunctionHandle {
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        FunctionHandle::Polynomial(Poly::var(nvars, i))
    }

    pub fn parse(src: &str, vars: &[&str]) -> Result<Self> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            vars,
        };
        let h = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {src:?}")));
        }
        Ok(h)
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        match self {
            FunctionHandle::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            FunctionHandle::Polynomial(p) => p.eval_f64(x),
            FunctionHandle::Exp { var, scale } => (to_f64(scale) * x[*var]).exp(),
            FunctionHandle::Sin { var, scale } => (to_f64(scale) * x[*var]).sin(),
            FunctionHandle::Sum(a, b) => a.eval_f64(x) + b.eval_f64(x),
            FunctionHandle::Product(a, b) => a.eval_f64(x) * b.eval_f64(x),
            FunctionHandle::Scaled(q, a) => to_f64(q) * a.eval_f64(x),
        }
    }

    /// Rigorous enclosure of the value at a rational point.
    pub fn enclose(&self, x: &[Rational], bits: u32) -> RatInterval {
        match self {
            FunctionHandle::Polynomial(p) => RatInterval::point(p.eval(x)),
            FunctionHandle::Exp { var, scale } => exp_enclosure(&(scale * &x[*var]), bits),
            FunctionHandle::Sin { var, scale } => sin_cos_enclosure(&(scale * &x[*var]), bits).0,
            FunctionHandle::Sum(a, b) => &a.enclose(x, bits) + &b.enclose(x, bits),
            FunctionHandle::Product(a, b) => &a.enclose(x, bits) * &b.enclose(x, bits),
            FunctionHandle::Scaled(q, a) => a.enclose(x, bits).scale(q),
        }
    }

    /// Taylor model at `center` of order `order` on `domain`.
    pub fn build_model(&self, center: &[Rational], order: u32, domain: &Polydisc) -> Result<TaylorModel> {
        self.build_model_bits(center, order, domain, DEFAULT_PRECISION_BITS)
    }

    pub fn build_model_bits(&self, center: &[Rational], order: u32, domain: &Polydisc, bits: u32) -> Result<TaylorModel> {
        let n = center.len();
        match self {
            FunctionHandle::Polynomial(p) => TaylorModel::from_poly(p, center.to_vec(), order, domain.clone()),
            FunctionHandle::Exp { var, scale } => {
                let (coeffs, tail) = exp_coefficients(n, *var, scale, center, order, domain, bits, false);
                TaylorModel::from_parts(center.to_vec(), order, coeffs, domain.clone(), tail)
            }
            FunctionHandle::Sin { var, scale } => {
                let (coeffs, tail) = exp_coefficients(n, *var, scale, center, order, domain, bits, true);
                TaylorModel::from_parts(center.to_vec(), order, coeffs, domain.clone(), tail)
            }
            FunctionHandle::Sum(a, b) => a
                .build_model_bits(center, order, domain, bits)?
                .add(&b.build_model_bits(center, order, domain, bits)?),
            FunctionHandle::Product(a, b) => a
                .build_model_bits(center, order, domain, bits)?
                .mul(&b.build_model_bits(center, order, domain, bits)?),
            FunctionHandle::Scaled(q, a) => Ok(a.build_model_bits(center, order, domain, bits)?.scale(q)),
        }
    }

    pub fn display<'a>(&'a self, vars: &'a [&'a str]) -> HandleDisplay<'a> {
        HandleDisplay { handle: self, vars }
    }
}

/// Coefficients `D^k g(a c) a^k / k!` of `g(a x_var)` at the center, for
/// `g = exp` or `g = sin`, and the closed-form remainder majorant.
#[allow(clippy::too_many_arguments)]
fn exp_coefficients(
    n: usize,
    var: usize,
    scale: &Rational,
    center: &[Rational],
    order: u32,
    domain: &Polydisc,
    bits: u32,
    is_sin: bool,
) -> (BTreeMap<Vec<u32>, RatInterval>, f64) {
    let arg = scale * &center[var];
    let cycle: Vec<RatInterval> = if is_sin {
        let (s, c) = sin_cos_enclosure(&arg, bits);
        vec![s.clone(), c.clone(), -&s, -&c]
    } else {
        vec![exp_enclosure(&arg, bits)]
    };
    let mut coeffs = BTreeMap::new();
    let mut factor = Rational::one();
    for k in 0..=order {
        if k > 0 {
            factor = factor * scale / int(k as i64);
        }
        let mut e = vec![0; n];
        e[var] = k;
        let base = &cycle[k as usize % cycle.len()];
        coeffs.insert(e, base.scale(&factor));
    }
    let reach = scale.abs() * from_f64(domain.radii()[var]);
    let lead = if is_sin { 1.0 } else { cycle[0].mag_f64() };
    let tail = crate::interval::up(lead * exp_tail_upper(&reach, order, bits));
    (coeffs, tail)
}

pub struct HandleDisplay<'a> {
    handle: &'a FunctionHandle,
    vars: &'a [&'a str],
}

impl fmt::Display for HandleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars;
        let sub = move |h: &'_ FunctionHandle| HandleDisplay { handle: h, vars }.to_string();
        match self.handle {
            FunctionHandle::Polynomial(p) => write!(f, "{}", PolyDisplay { poly: p, names: self.vars }),
            FunctionHandle::Exp { var, scale } => write!(f, "exp({}*{})", scale, self.vars[*var]),
            FunctionHandle::Sin { var, scale } => write!(f, "sin({}*{})", scale, self.vars[*var]),
            FunctionHandle::Sum(a, b) => write!(f, "({}) + ({})", sub(a), sub(b)),
            FunctionHandle::Product(a, b) => write!(f, "({})*({})", sub(a), sub(b)),
            FunctionHandle::Scaled(q, a) => write!(f, "{}*({})", q, sub(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // scientific notation: 1e-3, 2E5
            if i + 1 < chars.len()
                && (chars[i] == 'e' || chars[i] == 'E')
                && (chars[i + 1].is_ascii_digit()
                    || ((chars[i + 1] == '-' || chars[i + 1] == '+') && i + 2 < chars.len() && chars[i + 2].is_ascii_digit()))
            {
                i += 2;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

fn add_handles(a: FunctionHandle, b: FunctionHandle) -> FunctionHandle {
    match (a, b) {
        (FunctionHandle::Polynomial(p), FunctionHandle::Polynomial(q)) => FunctionHandle::Polynomial(&p + &q),
        (a, b) => FunctionHandle::Sum(Box::new(a), Box::new(b)),
    }
}

fn mul_handles(a: FunctionHandle, b: FunctionHandle) -> FunctionHandle {
    match (a, b) {
        (FunctionHandle::Polynomial(p), FunctionHandle::Polynomial(q)) => FunctionHandle::Polynomial(&p * &q),
        (FunctionHandle::Polynomial(p), b) | (b, FunctionHandle::Polynomial(p)) if p.degree() == 0 => {
            scale_handle(b, &p.coefficient(&vec![0; p.nvars()]))
        }
        (a, b) => FunctionHandle::Product(Box::new(a), Box::new(b)),
    }
}

fn scale_handle(h: FunctionHandle, q: &Rational) -> FunctionHandle {
    match h {
        FunctionHandle::Polynomial(p) => FunctionHandle::Polynomial(p.scale(q)),
        h if q.is_one() => h,
        h => FunctionHandle::Scaled(q.clone(), Box::new(h)),
    }
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.vars.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<FunctionHandle> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = add_handles(acc, t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add_handles(acc, scale_handle(t, &int(-1)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FunctionHandle> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let u = self.unary()?;
                acc = mul_handles(acc, u);
            } else if self.eat('/') {
                let u = self.unary()?;
                let q = match u.as_polynomial() {
                    Some(p) if p.degree() == 0 && !p.is_zero() => p.coefficient(&vec![0; p.nvars()]),
                    _ => return Err(Error::Parse("division only by nonzero constants".into())),
                };
                acc = scale_handle(acc, &(Rational::one() / q));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FunctionHandle> {
        if self.eat('-') {
            let u = self.unary()?;
            return Ok(scale_handle(u, &int(-1)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FunctionHandle> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = match self.tokens.get(self.pos) {
                Some(Token::Num(s)) => s.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?,
                _ => return Err(Error::Parse("exponent must be a nonnegative integer".into())),
            };
            self.pos += 1;
            if k > 64 {
                return Err(Error::Parse(format!("exponent {k} too large")));
            }
            let mut acc = FunctionHandle::Polynomial(Poly::constant(self.n(), Rational::one()));
            for _ in 0..k {
                acc = mul_handles(acc, base.clone());
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FunctionHandle> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Token::Num(s) => Ok(FunctionHandle::Polynomial(Poly::constant(self.n(), parse_rational(&s)?))),
            Token::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(name) if name == "exp" || name == "sin" => {
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                let (var, scale) = linear_argument(&arg)
                    .ok_or_else(|| Error::Parse(format!("argument of {name} must have the form a*x")))?;
                if name == "exp" {
                    Ok(FunctionHandle::Exp { var, scale })
                } else {
                    Ok(FunctionHandle::Sin { var, scale })
                }
            }
            Token::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(FunctionHandle::coordinate(self.n(), i)),
                None => Err(Error::Parse(format!("unknown identifier {name:?}"))),
            },
            Token::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

fn linear_argument(h: &FunctionHandle) -> Option<(usize, Rational)> {
    let p = h.as_polynomial()?;
    if p.terms().len() != 1 {
        return None;
    }
    let (e, c) = p.terms().iter().next()?;
    if e.iter().sum::<u32>() != 1 {
        return None;
    }
    Some((e.iter().position(|&k| k == 1)?, c.clone()))
}
