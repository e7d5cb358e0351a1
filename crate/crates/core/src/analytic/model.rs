//! Truncated multivariate power series with a rigorous remainder bound on a
//! closed polydisc.
//!
//! A model stands for every function `f` with `|f - P| <= tail_bound` on the
//! domain, where `P = sum c_a (x - center)^a` and each `c_a` is known to lie in
//! a rational interval. Exact (polynomial, rational) data gives point
//! intervals and a zero tail.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::analytic::poly::{total_degree, Multi, Poly};
use crate::analytic::polydisc::Polydisc;
use crate::error::{Error, Result};
use crate::interval::{up, upper_f64, RatInterval};
use crate::rational::{from_f64, int, to_f64, Rational};

#[derive(Debug, Clone)]
pub struct TaylorModel {
    center: Vec<Rational>,
    order: u32,
    coeffs: BTreeMap<Multi, RatInterval>,
    domain: Polydisc,
    tail_bound: f64,
    majorant: f64,
}

fn monomial_abs(e: &[u32], radii: &[f64]) -> f64 {
    e.iter().zip(radii).map(|(&k, r)| r.powi(k as i32)).product()
}

impl TaylorModel {
    /// Builds a model; terms above `order` are folded into the tail.
    pub fn from_parts(
        center: Vec<Rational>,
        order: u32,
        coeffs: BTreeMap<Multi, RatInterval>,
        domain: Polydisc,
        tail_bound: f64,
    ) -> Result<Self> {
        let n = center.len();
        if domain.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: domain.dim(),
            });
        }
        for (c, d) in center.iter().zip(domain.center()) {
            let c = to_f64(c);
            if (c - d.re).abs() > 1e-12 * (1.0 + c.abs()) || d.im != 0.0 {
                return Err(Error::InvalidParameter("model center differs from domain center".into()));
            }
        }
        let mut kept = BTreeMap::new();
        let mut tail = tail_bound;
        for (e, c) in coeffs {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            if c.is_zero() {
                continue;
            }
            if total_degree(&e) > order {
                tail = up(tail + c.mag_f64() * monomial_abs(&e, domain.radii()));
            } else {
                kept.insert(e, c);
            }
        }
        let mut m = TaylorModel {
            center,
            order,
            coeffs: kept,
            domain,
            tail_bound: tail,
            majorant: 0.0,
        };
        m.majorant = up(m.coefficient_majorant() + m.tail_bound);
        Ok(m)
    }

    pub fn from_poly(p: &Poly, center: Vec<Rational>, order: u32, domain: Polydisc) -> Result<Self> {
        if p.nvars() != center.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                got: p.nvars(),
            });
        }
        let shifted = p.shift(&center);
        let coeffs = shifted
            .terms()
            .iter()
            .map(|(e, c)| (e.clone(), RatInterval::point(c.clone())))
            .collect();
        Self::from_parts(center, order, coeffs, domain, 0.0)
    }

    pub fn constant(c: Rational, center: Vec<Rational>, order: u32, domain: Polydisc) -> Result<Self> {
        let n = center.len();
        Self::from_poly(&Poly::constant(n, c), center, order, domain)
    }

    /// Model with the same center, order and domain but new data.
    pub fn with_coeffs(&self, coeffs: BTreeMap<Multi, RatInterval>, tail: f64) -> TaylorModel {
        Self::from_parts(self.center.clone(), self.order, coeffs, self.domain.clone(), tail)
            .expect("shape inherited from a valid model")
    }

    pub fn nvars(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn domain(&self) -> &Polydisc {
        &self.domain
    }

    pub fn coeffs(&self) -> &BTreeMap<Multi, RatInterval> {
        &self.coeffs
    }

    pub fn coefficient(&self, e: &[u32]) -> RatInterval {
        self.coeffs.get(e).cloned().unwrap_or_else(RatInterval::zero)
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Upper bound for the sup norm on the whole domain.
    pub fn majorant(&self) -> f64 {
        self.majorant
    }

    pub fn is_exact(&self) -> bool {
        self.tail_bound == 0.0 && self.coeffs.values().all(RatInterval::is_point)
    }

    pub fn is_zero(&self) -> bool {
        self.tail_bound == 0.0 && self.coeffs.is_empty()
    }

    /// `sum |c_a| r^a` at the domain radii.
    pub fn coefficient_majorant(&self) -> f64 {
        up(self
            .coeffs
            .iter()
            .map(|(e, c)| c.mag_f64() * monomial_abs(e, self.domain.radii()))
            .sum())
    }

    /// The truncated polynomial in the shifted variable `t = x - center`,
    /// using coefficient midpoints.
    pub fn midpoint_poly(&self) -> Poly {
        Poly::from_terms(self.nvars(), self.coeffs.iter().map(|(e, c)| (e.clone(), c.mid())))
    }

    pub fn truncate(&self, order: u32) -> TaylorModel {
        Self::from_parts(self.center.clone(), order, self.coeffs.clone(), self.domain.clone(), self.tail_bound)
            .expect("valid model")
    }

    fn check_compatible(&self, o: &TaylorModel) -> Result<()> {
        if self.nvars() != o.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: o.nvars(),
            });
        }
        if self.center != o.center || self.domain != o.domain {
            return Err(Error::InvalidParameter("models live on different domains".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &TaylorModel) -> Result<TaylorModel> {
        self.check_compatible(o)?;
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &o.coeffs {
            let v = match coeffs.get(e) {
                Some(a) => a + c,
                None => c.clone(),
            };
            coeffs.insert(e.clone(), v);
        }
        let order = self.order.min(o.order);
        Self::from_parts(self.center.clone(), order, coeffs, self.domain.clone(), up(self.tail_bound + o.tail_bound))
    }

    pub fn neg(&self) -> TaylorModel {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect();
        self.with_coeffs(coeffs, self.tail_bound)
    }

    pub fn sub(&self, o: &TaylorModel) -> Result<TaylorModel> {
        self.add(&o.neg())
    }

    pub fn scale(&self, q: &Rational) -> TaylorModel {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e.clone(), c.scale(q))).collect();
        let tail = if self.tail_bound == 0.0 {
            0.0
        } else {
            up(self.tail_bound * upper_f64(&q.abs()))
        };
        self.with_coeffs(coeffs, tail)
    }

    /// Truncated product; the dropped high-order part and all cross terms with
    /// the remainders go into the tail.
    pub fn mul(&self, o: &TaylorModel) -> Result<TaylorModel> {
        self.check_compatible(o)?;
        let order = self.order.min(o.order);
        let radii = self.domain.radii().to_vec();
        let mut coeffs: BTreeMap<Multi, RatInterval> = BTreeMap::new();
        let mut dropped = 0.0;
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e: Multi = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if total_degree(&e) > order {
                    dropped += c1.mag_f64() * c2.mag_f64() * monomial_abs(&e, &radii);
                    continue;
                }
                let p = c1 * c2;
                let v = match coeffs.remove(&e) {
                    Some(a) => &a + &p,
                    None => p,
                };
                coeffs.insert(e, v);
            }
        }
        let pf = self.coefficient_majorant();
        let pg = o.coefficient_majorant();
        let tail = if self.tail_bound == 0.0 && o.tail_bound == 0.0 && dropped == 0.0 {
            0.0
        } else {
            up(up(dropped) + pf * o.tail_bound + self.tail_bound * pg + self.tail_bound * o.tail_bound)
        };
        Self::from_parts(self.center.clone(), order, coeffs, self.domain.clone(), tail)
    }

    pub fn pow(&self, k: u32) -> Result<TaylorModel> {
        let mut acc = TaylorModel::constant(Rational::from_integer(1.into()), self.center.clone(), self.order, self.domain.clone())?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Partial derivative of the polynomial part. The remainder of a
    /// derivative is not controlled on the same domain, so inexact models get
    /// an infinite tail.
    pub fn derivative(&self, var: usize) -> TaylorModel {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                coeffs.insert(e2, c.scale(&int(e[var] as i64)));
            }
        }
        let tail = if self.tail_bound == 0.0 { 0.0 } else { f64::INFINITY };
        self.with_coeffs(coeffs, tail)
    }

    /// Value of the truncated sum at a complex point, with an error radius
    /// covering the remainder, coefficient enclosures and float rounding.
    pub fn evaluate(&self, z: &[Complex64]) -> Result<(Complex64, f64)> {
        if z.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: z.len(),
            });
        }
        if !self.domain.contains_point(z) {
            return Err(Error::PointOutsideDomain);
        }
        let shifted: Vec<Complex64> = z.iter().zip(&self.center).map(|(z, c)| z - to_f64(c)).collect();
        let mut powers: Vec<Vec<Complex64>> = Vec::with_capacity(shifted.len());
        for s in &shifted {
            let mut p = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..self.order {
                let last = *p.last().unwrap();
                p.push(last * s);
            }
            powers.push(p);
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        let mut coef_err = 0.0;
        for (e, c) in &self.coeffs {
            let mono = e
                .iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |acc, (i, &k)| acc * powers[i][k as usize]);
            let mid = c.mid_f64();
            let err = (c - &RatInterval::point(from_f64(mid))).mag_f64();
            value += mono * mid;
            if e.iter().any(|&k| k > 0) || self.coeffs.len() > 1 {
                abs_sum += mono.norm() * mid.abs();
            }
            coef_err += mono.norm() * err;
        }
        let gamma = 4.0 * (self.order as f64 + self.nvars() as f64 + (self.coeffs.len() as f64).log2() + 4.0) * f64::EPSILON;
        let radius = up(self.tail_bound + coef_err + gamma * abs_sum);
        Ok((value, radius))
    }

    /// Rigorous enclosure of the modelled function at a real rational point.
    pub fn evaluate_exact(&self, x: &[Rational]) -> Result<RatInterval> {
        if x.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                got: x.len(),
            });
        }
        let zc: Vec<Complex64> = x.iter().map(|q| Complex64::new(to_f64(q), 0.0)).collect();
        if !self.domain.contains_point(&zc) {
            return Err(Error::PointOutsideDomain);
        }
        let shifted: Vec<Rational> = x.iter().zip(&self.center).map(|(x, c)| x - c).collect();
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(shifted.len());
        for s in &shifted {
            let mut p = vec![Rational::from_integer(1.into())];
            for _ in 0..self.order {
                let last = p.last().unwrap() * s;
                p.push(last);
            }
            powers.push(p);
        }
        let mut acc = RatInterval::zero();
        for (e, c) in &self.coeffs {
            let mut mono = Rational::from_integer(1.into());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    mono *= &powers[i][k as usize];
                }
            }
            if mono.is_zero() {
                continue;
            }
            acc = &acc + &c.scale(&mono);
        }
        if self.tail_bound > 0.0 {
            if !self.tail_bound.is_finite() {
                return Err(Error::PrecisionInsufficient {
                    radius: f64::INFINITY,
                    tol: 0.0,
                });
            }
            acc = acc.widen(&from_f64(self.tail_bound));
        }
        Ok(acc)
    }

    /// `sum |c_a| rho^a + tail`, where `rho` are the radii of `d` measured from
    /// the model center. Requires `d` inside the domain.
    pub fn sup_norm_bound(&self, d: &Polydisc) -> Result<f64> {
        if !self.domain.contains(d) {
            return Err(Error::NotContained);
        }
        let rho: Vec<Rational> = d
            .center()
            .iter()
            .zip(&self.center)
            .zip(d.radii())
            .map(|((dc, c), r)| {
                let off = dc - to_f64(c);
                if off.norm() == 0.0 {
                    from_f64(*r)
                } else {
                    from_f64(up(off.norm() + r))
                }
            })
            .collect();
        let mut s = Rational::zero();
        for (e, c) in &self.coeffs {
            let mut t = c.mag();
            for (rho, &k) in rho.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(rho.clone(), k as usize);
                }
            }
            s += t;
        }
        let s = upper_f64(&s);
        if self.tail_bound == 0.0 {
            Ok(s)
        } else {
            Ok(up(s + self.tail_bound))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit1() -> Polydisc {
        Polydisc::unit(1)
    }

    #[test]
    fn constant_model() {
        let m = TaylorModel::constant(rat(1, 1), vec![rat(0, 1)], 4, unit1()).unwrap();
        let (v, r) = m.evaluate(&[Complex64::new(0.3, 0.2)]).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
        assert_eq!(r, 0.0);
        assert_eq!(m.sup_norm_bound(&unit1()).unwrap(), 1.0);
    }

    #[test]
    fn exact_square() {
        let t2 = Poly::var(1, 0).pow(2);
        let m = TaylorModel::from_poly(&t2, vec![rat(0, 1)], 4, unit1()).unwrap();
        let v = m.evaluate_exact(&[rat(1, 3)]).unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo(), &rat(1, 9));
    }

    #[test]
    fn coordinate_on_small_disc() {
        let t = Poly::var(1, 0);
        let m = TaylorModel::from_poly(&t, vec![rat(0, 1)], 4, unit1()).unwrap();
        let d = Polydisc::real(&[0.0], &[0.125]).unwrap();
        assert_eq!(m.sup_norm_bound(&d).unwrap(), 0.125);
        let outside = Polydisc::real(&[0.5], &[0.75]).unwrap();
        assert!(matches!(m.sup_norm_bound(&outside), Err(Error::NotContained)));
    }

    #[test]
    fn truncation_folds_into_tail() {
        let t3 = Poly::var(1, 0).pow(3);
        let m = TaylorModel::from_poly(&t3, vec![rat(0, 1)], 2, unit1()).unwrap();
        assert!(m.coeffs().is_empty());
        assert!(m.tail_bound() >= 1.0);
        assert!(m.evaluate(&[Complex64::new(2.0, 0.0)]).is_err());
    }
}
