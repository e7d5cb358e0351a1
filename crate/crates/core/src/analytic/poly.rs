use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::rational::{int, to_f64, Rational};

/// Exponent multi-index.
pub type Multi = Vec<u32>;

pub fn total_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// Exact multivariate polynomial with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Multi, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponent: Multi, c: Rational) -> Self {
        assert_eq!(exponent.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exponent, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Multi, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Multi, c: Rational) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Multi, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Coefficient of `x_i^k`, as a polynomial in the same variables.
    pub fn coeff_in(&self, i: usize, k: u32) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = e.clone();
                e2[i] = 0;
                p.add_term(e2, c.clone());
            }
        }
        p
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * e.iter().zip(x).map(|(&k, xi)| xi.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(z)
                    .fold(Complex64::new(to_f64(c), 0.0), |acc, (&k, zi)| acc * zi.powu(k))
            })
            .sum()
    }

    /// Sum of `|c| * |x|^e`, the magnitude bound used in rounding estimates.
    pub fn abs_eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c).abs() * e.iter().zip(x).map(|(&k, xi)| xi.abs().powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * int(e[i] as i64));
            }
        }
        p
    }

    /// The polynomial `t -> p(center + t)`.
    pub fn shift(&self, center: &[Rational]) -> Poly {
        assert_eq!(center.len(), self.nvars);
        if center.iter().all(|c| c.is_zero()) {
            return self.clone();
        }
        let n = self.nvars;
        let shifted_vars: Vec<Poly> = (0..n)
            .map(|i| &Poly::var(n, i) + &Poly::constant(n, center[i].clone()))
            .collect();
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &shifted_vars[i].pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Substitutes polynomials for every variable.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &subs[i].pow(k);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Embeds into a ring with more variables; variable `i` maps to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            p.add_term(e2, c.clone());
        }
        p
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut acc: BTreeMap<Multi, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Multi = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

/// Renders with the given variable names, highest degree first.
pub struct PolyDisplay<'a> {
    pub poly: &'a Poly,
    pub names: &'a [&'a str],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|a, b| total_degree(b.0).cmp(&total_degree(a.0)).then(b.0.cmp(a.0)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            let mut parts = Vec::new();
            if !mag.is_one() || is_const {
                parts.push(mag.to_string());
            }
            for (j, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(self.names[j].to_string()),
                    _ => parts.push(format!("{}^{}", self.names[j], k)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn shift_square() {
        // (c + t)^2 = c^2 + 2ct + t^2
        let t2 = Poly::var(1, 0).pow(2);
        let s = t2.shift(&[rat(1, 3)]);
        assert_eq!(s.coefficient(&[0]), rat(1, 9));
        assert_eq!(s.coefficient(&[1]), rat(2, 3));
        assert_eq!(s.coefficient(&[2]), rat(1, 1));
    }

    #[test]
    fn display() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x.pow(2) + &y.pow(2)) - &Poly::constant(2, rat(1, 1));
        let s = PolyDisplay { poly: &p, names: &["x", "y"] }.to_string();
        assert_eq!(s, "x^2 + y^2 - 1");
    }
}
