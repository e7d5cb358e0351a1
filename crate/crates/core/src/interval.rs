//! Closed intervals with exact rational endpoints, and rigorous enclosures of
//! `exp`, `sin` and `cos` at rational arguments.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, to_f64, Rational};

/// Default working precision (bits after the binary point) for enclosures.
pub const DEFAULT_PRECISION_BITS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

/// Nudges a float upward so it bounds the rational it was rounded from.
pub fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x + x.abs() * 1e-14 + f64::MIN_POSITIVE
    }
}

/// f64 upper bound for a rational.
pub fn upper_f64(q: &Rational) -> f64 {
    let x = to_f64(q);
    if x.is_finite() && crate::rational::from_f64(x) == *q {
        return x;
    }
    x + x.abs() * 1e-14 + f64::MIN_POSITIVE
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    if Integer::is_multiple_of(&scale, q.denom()) {
        return q.clone();
    }
    let n = (q.numer() * &scale).div_floor(q.denom());
    BigRational::new(n, scale)
}

pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    -floor_dyadic(&-q, bits)
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        RatInterval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn one() -> Self {
        Self::point(Rational::one())
    }

    /// `[c - r, c + r]`.
    pub fn ball(c: Rational, r: Rational) -> Self {
        let r = r.abs();
        RatInterval::new(&c - &r, c + r)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.is_point() && self.lo.is_zero()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn mid(&self) -> Rational {
        if self.is_point() {
            self.lo.clone()
        } else {
            (&self.lo + &self.hi) / int(2)
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `max(|lo|, |hi|)`.
    pub fn mag(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn mag_f64(&self) -> f64 {
        upper_f64(&self.mag())
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if self.is_point() {
            return Self::point(&self.lo * q);
        }
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    /// Grows the interval by `r >= 0` on both sides.
    pub fn widen(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return self.clone();
        }
        RatInterval {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    /// Rounds endpoints outward onto the grid `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Self {
        RatInterval {
            lo: floor_dyadic(&self.lo, bits),
            hi: ceil_dyadic(&self.hi, bits),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, o: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, o: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, o: &RatInterval) -> RatInterval {
        if o.is_point() {
            return self.scale(&o.lo);
        }
        if self.is_point() {
            return o.scale(&self.lo);
        }
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

/// Magnitudes of `|x|^k / k!` scaled by `2^work`, as integer lower and
/// upper bounds, for `k = 0, 1, ..` until `stop(k, upper)` holds.
struct ScaledTerms {
    p: BigInt,
    q: BigInt,
    k: u64,
    lo: BigInt,
    hi: BigInt,
}

impl ScaledTerms {
    fn new(ax: &Rational, work: u32) -> Self {
        ScaledTerms {
            p: ax.numer().clone(),
            q: ax.denom().clone(),
            k: 0,
            lo: pow2(work),
            hi: pow2(work),
        }
    }

    fn advance(&mut self) {
        self.k += 1;
        let d = &self.q * BigInt::from(self.k);
        self.lo = (&self.lo * &self.p).div_floor(&d);
        self.hi = (&self.hi * &self.p).div_ceil(&d);
    }
}

fn scaled_interval(lo: BigInt, hi: BigInt, work: u32, bits: u32) -> RatInterval {
    let s = pow2(work);
    RatInterval::new(BigRational::new(lo, s.clone()), BigRational::new(hi, s)).round_out(bits)
}

/// Encloses `e^x` to within `2^-bits`.
pub fn exp_enclosure(x: &Rational, bits: u32) -> RatInterval {
    if x.is_zero() {
        return RatInterval::one();
    }
    let ax = x.abs();
    // e^{|x|} <= 3^{ceil |x|}
    let ceil = ax.ceil().to_integer();
    let growth = num_traits::pow(BigInt::from(3), usize::try_from(ceil).unwrap_or(64));
    let work = bits + 32;
    let eps = pow2(work - bits - 4);
    let negative = x.is_negative();
    let mut t = ScaledTerms::new(&ax, work);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    loop {
        if negative && t.k % 2 == 1 {
            lo -= &t.hi;
            hi -= &t.lo;
        } else {
            lo += &t.lo;
            hi += &t.hi;
        }
        t.advance();
        if t.k as f64 > to_f64(&ax) && &t.hi * &growth < eps {
            let rem = &t.hi * &growth;
            return scaled_interval(lo - &rem, hi + rem, work, bits);
        }
    }
}

/// Encloses `(sin x, cos x)` to within `2^-bits`.
pub fn sin_cos_enclosure(x: &Rational, bits: u32) -> (RatInterval, RatInterval) {
    if x.is_zero() {
        return (RatInterval::zero(), RatInterval::one());
    }
    let ax = x.abs();
    let work = bits + 32;
    let eps = pow2(work - bits - 4);
    let negative = x.is_negative();
    let mut t = ScaledTerms::new(&ax, work);
    let mut sin = (BigInt::zero(), BigInt::zero());
    let mut cos = (BigInt::zero(), BigInt::zero());
    loop {
        let (acc, mut plus) = match t.k % 4 {
            0 => (&mut cos, true),
            1 => (&mut sin, true),
            2 => (&mut cos, false),
            _ => (&mut sin, false),
        };
        if negative && t.k % 2 == 1 {
            plus = !plus;
        }
        if plus {
            acc.0 += &t.lo;
            acc.1 += &t.hi;
        } else {
            acc.0 -= &t.hi;
            acc.1 -= &t.lo;
        }
        t.advance();
        // every derivative of sin and cos is bounded by 1 on the real line
        if t.k as f64 > to_f64(&ax) && t.hi < eps {
            let rem = t.hi.clone();
            return (
                scaled_interval(&sin.0 - &rem, &sin.1 + &rem, work, bits),
                scaled_interval(cos.0 - &rem, cos.1 + rem, work, bits),
            );
        }
    }
}

/// Upper bound for `sum_{k > order} x^k / k!` with `x >= 0`.
pub fn exp_tail_upper(x: &Rational, order: u32, bits: u32) -> f64 {
    assert!(!x.is_negative());
    if x.is_zero() {
        return 0.0;
    }
    let e = exp_enclosure(x, bits);
    let mut partial = Rational::zero();
    let mut term = Rational::one();
    for k in 0..=order as i64 {
        if k > 0 {
            term = &term * x / int(k);
        }
        partial += &term;
    }
    let diff = e.hi() - partial;
    if diff.is_negative() {
        0.0
    } else {
        upper_f64(&diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn exp_enclosure_contains_reference() {
        for (a, b) in [(1, 2), (-3, 7), (1, 1), (5, 2), (-1, 1)] {
            let x = rat(a, b);
            let e = exp_enclosure(&x, 120);
            let r = (a as f64 / b as f64).exp();
            assert!((to_f64(e.lo()) - r).abs() < 1e-14 * r);
            assert!(to_f64(&e.width()) < 1e-30);
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let x = rat(7, 10);
        let (s, c) = sin_cos_enclosure(&x, 150);
        let one = &(&s * &s) + &(&c * &c);
        assert!(one.contains(&Rational::one()));
        assert!((s.mid_f64() - 0.7f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn exp_tail_matches_closed_form() {
        // e - (1 + 1 + 1/2)
        let t = exp_tail_upper(&Rational::one(), 2, 120);
        let exact = std::f64::consts::E - 2.5;
        assert!(t >= exact && t < exact + 1e-12);
    }

    #[test]
    fn dyadic_rounding_is_outward() {
        let i = RatInterval::new(rat(1, 3), rat(2, 3)).round_out(10);
        assert!(i.lo() <= &rat(1, 3) && i.hi() >= &rat(2, 3));
        assert!(i.lo().denom() <= &BigInt::from(1024));
    }
}
