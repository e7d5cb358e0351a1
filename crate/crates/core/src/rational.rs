//! Exact rationals, heights and height-bounded enumeration.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator; zero is stored as `0/1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Height of a reduced fraction `a/b`: `max(|a|, b)`. `H(0) = 1`.
pub fn height(q: &Rational) -> BigInt {
    let a = q.numer().abs();
    let b = q.denom().clone();
    if a > b {
        a
    } else {
        b
    }
}

pub fn rat(a: i64, b: i64) -> Rational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn int(a: i64) -> Rational {
    BigRational::from_integer(BigInt::from(a))
}

/// Exact value of a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    BigRational::from_float(x).expect("finite float")
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // num's conversion gives up on huge numerators/denominators
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift > 0 {
            q / BigRational::from_integer(BigInt::one() << shift as usize)
        } else {
            q * BigRational::from_integer(BigInt::one() << (-shift) as usize)
        };
        let n2 = scaled.numer().to_f64().unwrap_or(0.0);
        let d2 = scaled.denom().to_f64().unwrap_or(1.0);
        (n2 / d2) * 2f64.powi(shift as i32)
    })
}

/// Parses `a/b`, integers and plain decimals (`-0.25`, `1e-3`) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{ip}{fp}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Height bound `H >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HeightBound(u64);

impl HeightBound {
    pub fn new(h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidParameter("height bound must be >= 1".into()));
        }
        Ok(HeightBound(h))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// A nonempty vector of rationals; its height is the maximum coordinate height.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("empty rational vector".into()));
        }
        Ok(RationalVector(coords))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn height(&self) -> BigInt {
        self.0.iter().map(height).max().unwrap_or_else(BigInt::one)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

pub fn height_vector(x: &RationalVector) -> BigInt {
    x.height()
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coords = v
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        RationalVector::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a rational as `"a/b"` (`"a"` when `b = 1`).
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

fn cmp_frac(a: &(i64, i64), b: &(i64, i64)) -> Ordering {
    (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
}


/// Reduced pairs `(a, b)` with `max(|a|, b) <= h` and `lo <= a/b <= hi`,
/// sorted by value.
pub(crate) fn enumerate_pairs(h: u64, lo: f64, hi: f64) -> Vec<(i64, i64)> {
    if !(lo <= hi) {
        return Vec::new();
    }
    let h = h as i64;
    let lo_q = from_f64(lo.max(-(h as f64) - 1.0));
    let hi_q = from_f64(hi.min(h as f64 + 1.0));
    let lo = lo.max(-(h as f64) - 1.0);
    let hi = hi.min(h as f64 + 1.0);
    let mut out = Vec::new();
    for b in 1..=h {
        let a_min = ((lo * b as f64).ceil() as i64).max(-h);
        let a_max = ((hi * b as f64).floor() as i64).min(h);
        for a in (a_min - 1).max(-h)..=(a_max + 1).min(h) {
            if a.gcd(&b) != 1 {
                continue;
            }
            let inside = if a > a_min && a < a_max {
                true
            } else {
                let q = rat(a, b);
                q >= lo_q && q <= hi_q
            };
            if inside {
                out.push((a, b));
            }
        }
    }
    out.sort_by(cmp_frac);
    out
}

/// All reduced `a/b` with height at most `h` inside `[lo, hi]`, ascending.
pub fn enumerate_rationals(h: HeightBound, lo: f64, hi: f64) -> Vec<Rational> {
    enumerate_pairs(h.get(), lo, hi)
        .into_iter()
        .map(|(a, b)| rat(a, b))
        .collect()
}

/// Cartesian product of per-coordinate enumerations over `box_`, in
/// lexicographic order of the coordinate values.
pub fn enumerate_grid(h: HeightBound, box_: &[(f64, f64)]) -> Vec<RationalVector> {
    if box_.is_empty() {
        return Vec::new();
    }
    let axes: Vec<Vec<Rational>> = box_
        .iter()
        .map(|&(lo, hi)| enumerate_rationals(h, lo, hi))
        .collect();
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for q in axis {
                let mut v = prefix.clone();
                v.push(q.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(RationalVector).collect()
}
