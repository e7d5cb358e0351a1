use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;

use super::scenario::{Scenario, ScenarioKind};
use crate::analytic::roots::polynomial_roots;
use crate::error::{Error, Result};
use crate::interval::{RatInterval, DEFAULT_PRECISION_BITS};
use crate::rational::{enumerate_pairs, from_f64, rat, to_f64, HeightBound, Rational, RationalVector};

/// Membership tolerance for graph points.
pub const DEFAULT_TOL: f64 = 1e-30;

/// Axis of reduced fractions, sorted, with their float values.
struct Axis {
    pairs: Vec<(i64, i64)>,
    values: Vec<f64>,
}

impl Axis {
    fn new(h: u64, lo: f64, hi: f64) -> Self {
        let pairs = enumerate_pairs(h, lo, hi);
        let values = pairs.iter().map(|&(a, b)| a as f64 / b as f64).collect();
        Axis { pairs, values }
    }

    /// Indices whose values lie within `w` of `y`.
    fn near(&self, y: f64, w: f64) -> std::ops::Range<usize> {
        let a = self.values.partition_point(|v| *v < y - w);
        let b = self.values.partition_point(|v| *v <= y + w);
        a..b
    }

    fn rational(&self, i: usize) -> Rational {
        let (a, b) = self.pairs[i];
        rat(a, b)
    }
}

/// All points of the scenario's set with height `<= h` in its box.
///
/// Base coordinates run over the rationals of height `<= h`; the last
/// coordinate is found by solving. Graph points are accepted when a
/// rigorous enclosure of `f(x)` lies within `tol` of the candidate and
/// rejected when it stays `tol` away; anything else is a precision
/// failure. Algebraic points are checked by exact substitution.
pub fn harvest_points(s: &Scenario, h: HeightBound, tol: f64) -> Result<Vec<RationalVector>> {
    harvest_points_bits(s, h, tol, DEFAULT_PRECISION_BITS)
}

pub fn harvest_points_bits(s: &Scenario, h: HeightBound, tol: f64, bits: u32) -> Result<Vec<RationalVector>> {
    let n = s.ambient_dim();
    let iv = s.bbox.intervals();
    let base: Vec<Axis> = iv[..n - 1].iter().map(|&(lo, hi)| Axis::new(h.get(), lo, hi)).collect();
    let fiber = Axis::new(h.get(), iv[n - 1].0, iv[n - 1].1);
    let total: usize = base.iter().map(|a| a.pairs.len()).product();
    if total == 0 || fiber.pairs.is_empty() {
        return Ok(Vec::new());
    }
    let tol_q = from_f64(tol);
    let found: Vec<Vec<RationalVector>> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut xi = Vec::with_capacity(n - 1);
            for axis in base.iter().rev() {
                xi.push(idx % axis.pairs.len());
                idx /= axis.pairs.len();
            }
            xi.reverse();
            let xf: Vec<f64> = xi.iter().zip(&base).map(|(&i, a)| a.values[i]).collect();
            let xq = || -> Vec<Rational> { xi.iter().zip(&base).map(|(&i, a)| a.rational(i)).collect() };
            match &s.kind {
                ScenarioKind::Graph(f) => graph_fiber(f, &xf, xq, &fiber, &tol_q, tol, bits),
                ScenarioKind::Algebraic(p) => Ok(algebraic_fiber(p, &xf, xq, &fiber)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let set: BTreeSet<RationalVector> = found.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

fn point(mut x: Vec<Rational>, y: Rational) -> RationalVector {
    x.push(y);
    RationalVector::new(x).expect("nonempty")
}

fn graph_fiber(
    f: &crate::analytic::FunctionHandle,
    xf: &[f64],
    xq: impl Fn() -> Vec<Rational>,
    fiber: &Axis,
    tol_q: &Rational,
    tol: f64,
    bits: u32,
) -> Result<Vec<RationalVector>> {
    let y = f.eval_f64(xf);
    if !y.is_finite() {
        return Ok(Vec::new());
    }
    let range = fiber.near(y, 1e-9 * (1.0 + y.abs()));
    if range.is_empty() {
        return Ok(Vec::new());
    }
    let x = xq();
    let enc = f.enclose(&x, bits);
    if to_f64(&enc.width()) > tol {
        return Err(Error::PrecisionInsufficient {
            radius: to_f64(&enc.width()),
            tol,
        });
    }
    let mut out = Vec::new();
    for i in range {
        let c = fiber.rational(i);
        let diff = RatInterval::new(enc.lo() - &c, enc.hi() - &c);
        if diff.lo() > &-tol_q.clone() && diff.hi() < tol_q {
            out.push(point(x.clone(), c));
        } else if diff.lo() > tol_q || diff.hi() < &-tol_q.clone() {
            continue;
        } else {
            return Err(Error::PrecisionInsufficient {
                radius: to_f64(&diff.mag()),
                tol,
            });
        }
    }
    Ok(out)
}

fn algebraic_fiber(p: &crate::analytic::Poly, xf: &[f64], xq: impl Fn() -> Vec<Rational>, fiber: &Axis) -> Vec<RationalVector> {
    let n = p.nvars();
    let deg = p.degree_in(n - 1);
    let mut probe = xf.to_vec();
    probe.push(0.0);
    let coeffs: Vec<Complex64> = (0..=deg)
        .map(|k| Complex64::new(p.coeff_in(n - 1, k).eval_f64(&probe), 0.0))
        .collect();
    let mut candidates = BTreeSet::new();
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        // possibly a whole vertical fiber; confirmed exactly below
        candidates.extend(0..fiber.pairs.len());
    } else {
        for r in polynomial_roots(&coeffs) {
            let scale = 1.0 + r.re.abs();
            if r.im.abs() > 1e-6 * scale {
                continue;
            }
            candidates.extend(fiber.near(r.re, 1e-6 * scale));
        }
    }
    if candidates.is_empty() {
        return Vec::new();
    }
    let x = xq();
    let mut out = Vec::new();
    for i in candidates {
        let mut v = x.clone();
        v.push(fiber.rational(i));
        if num_traits::Zero::is_zero(&p.eval(&v)) {
            out.push(RationalVector::new(v).expect("nonempty"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::scenario::{resolve, ScenarioRef};
    use crate::rational::int;

    fn scenario(name: &str) -> Scenario {
        match resolve(name, None).unwrap() {
            ScenarioRef::Single(s) => s,
            ScenarioRef::Family(_) => panic!(),
        }
    }

    fn hb(h: u64) -> HeightBound {
        HeightBound::new(h).unwrap()
    }

    #[test]
    fn circle_height_five() {
        let pts = harvest_points(&scenario("circle"), hb(5), DEFAULT_TOL).unwrap();
        assert_eq!(pts.len(), 12);
        let mut want = BTreeSet::new();
        for (a, b) in [(0, 5), (5, 0), (3, 4), (4, 3)] {
            for sa in [-1, 1] {
                for sb in [-1, 1] {
                    want.insert(RationalVector::new(vec![rat(sa * a, 5), rat(sb * b, 5)]).unwrap());
                }
            }
        }
        assert_eq!(pts.into_iter().collect::<BTreeSet<_>>(), want);
    }

    #[test]
    fn brute_force_agrees() {
        for name in ["circle", "parabola", "line", "hyperbola:0"] {
            let s = scenario(name);
            let ScenarioKind::Algebraic(p) = &s.kind else { panic!() };
            let grid = crate::rational::enumerate_grid(hb(12), s.bbox.intervals());
            let want: Vec<RationalVector> = grid.into_iter().filter(|v| num_traits::Zero::is_zero(&p.eval(v.coords()))).collect();
            assert_eq!(harvest_points(&s, hb(12), DEFAULT_TOL).unwrap(), want, "{name}");
        }
    }

    #[test]
    fn parabola_height_two() {
        let pts = harvest_points(&scenario("parabola"), hb(2), DEFAULT_TOL).unwrap();
        let want: Vec<RationalVector> = [(-1, 1), (0, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| RationalVector::new(vec![int(a), int(b)]).unwrap())
            .collect();
        assert_eq!(pts, want);
    }

    #[test]
    fn exp_graph_single_point() {
        let pts = harvest_points(&scenario("exp_graph"), hb(10), DEFAULT_TOL).unwrap();
        assert_eq!(pts, vec![RationalVector::new(vec![int(0), int(1)]).unwrap()]);
        let pts = harvest_points(&scenario("sin_graph"), hb(30), DEFAULT_TOL).unwrap();
        assert_eq!(pts, vec![RationalVector::new(vec![int(0), int(0)]).unwrap()]);
    }
}
