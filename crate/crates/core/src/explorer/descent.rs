//! Splits covered points into those lying on an algebraic arc contained in
//! the set and the rest.

use std::f64::consts::TAU;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::cover::CoveringReport;
use super::scenario::{Scenario, ScenarioKind};
use crate::analytic::{FunctionHandle, Poly, Polydisc};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::rational::{Rational, RationalVector};

/// Order of the exact series comparison.
pub const SERIES_ORDER: usize = 8;
/// Normalized distances at or below this count as "on the set".
pub const DEFAULT_TOL: f64 = 1e-9;
/// Normalized distances at or above this count as "off the set".
pub const SEPARATION: f64 = 1e-6;
const RADII: [f64; 3] = [0.1, 0.03, 0.01];
const ANGLES: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Algebraic,
    Transcendental,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicPartWitness {
    pub point: RationalVector,
    /// Index of the hypersurface in the covering report.
    pub hypersurface: usize,
    pub classification: Classification,
    /// The contained arc comes from the set's own equation rather than
    /// from the covering hypersurface.
    pub via_defining_equation: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentReport {
    pub witnesses: Vec<AlgebraicPartWitness>,
    pub algebraic: usize,
    pub transcendental: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Contained,
    NotContained,
    Ambiguous,
}

/// Truncated power series in one variable with interval coefficients.
type Series = Vec<RatInterval>;

fn s_const(c: &Rational) -> Series {
    let mut s = vec![RatInterval::zero(); SERIES_ORDER + 1];
    s[0] = RatInterval::point(c.clone());
    s
}

fn s_add(a: &Series, b: &Series) -> Series {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn s_mul(a: &Series, b: &Series) -> Series {
    let mut out = vec![RatInterval::zero(); SERIES_ORDER + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(SERIES_ORDER + 1 - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn s_eval_poly(p: &Poly, args: &[Series]) -> Series {
    let mut out = vec![RatInterval::zero(); SERIES_ORDER + 1];
    for (e, c) in p.terms() {
        let mut t = s_const(c);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = s_mul(&t, &args[i]);
            }
        }
        out = s_add(&out, &t);
    }
    out
}

/// Branch of `P = 0` through `p` as `(x(t), y(t))`, parametrized by the
/// coordinate in which `P` is not critical. `None` at singular points.
fn branch_series(pv: &Poly, p: &[Rational]) -> Option<[Series; 2]> {
    let dx = pv.partial(0).eval(p);
    let dy = pv.partial(1).eval(p);
    let (free, solved, slope) = if !dy.is_zero() {
        (0, 1, dy)
    } else if !dx.is_zero() {
        (1, 0, dx)
    } else {
        return None;
    };
    let mut t = s_const(&p[free]);
    t[1] = RatInterval::one();
    let mut u = s_const(&p[solved]);
    let inv = Rational::from_integer(1.into()) / slope;
    for _ in 0..=SERIES_ORDER {
        let mut args = vec![Vec::new(), Vec::new()];
        args[free] = t.clone();
        args[solved] = u.clone();
        let r = s_eval_poly(pv, &args);
        u = u.iter().zip(&r).map(|(a, b)| a - &b.scale(&inv)).collect();
    }
    let mut out = [Vec::new(), Vec::new()];
    out[free] = t;
    out[solved] = u;
    Some(out)
}

/// Compares the scenario's defining function along the branch through
/// order [`SERIES_ORDER`]. `Some(false)` is a proof of non-containment.
fn series_test(s: &Scenario, pv: &Poly, p: &[Rational]) -> Result<Option<bool>> {
    let Some([xs, ys]) = branch_series(pv, p) else {
        return Ok(None);
    };
    let f_series = match &s.kind {
        ScenarioKind::Algebraic(q) => s_eval_poly(q, &[xs, ys]),
        ScenarioKind::Graph(f) => {
            let taylor = taylor_coefficients(f, &p[0])?;
            let mut shift = xs.clone();
            shift[0] = RatInterval::zero();
            let mut comp = vec![RatInterval::zero(); SERIES_ORDER + 1];
            let mut power = s_const(&Rational::from_integer(1.into()));
            for c in &taylor {
                let term: Series = power.iter().map(|x| x * c).collect();
                comp = s_add(&comp, &term);
                power = s_mul(&power, &shift);
            }
            ys.iter().zip(&comp).map(|(a, b)| a - b).collect()
        }
    };
    Ok(Some(f_series.iter().all(|c| c.contains_zero())))
}

fn taylor_coefficients(f: &FunctionHandle, x0: &Rational) -> Result<Vec<RatInterval>> {
    let disc = Polydisc::real(&[crate::rational::to_f64(x0)], &[0.5])?;
    let model = f.build_model(std::slice::from_ref(x0), SERIES_ORDER as u32, &disc)?;
    Ok((0..=SERIES_ORDER as u32).map(|k| model.coefficient(&[k])).collect())
}

fn normalized_distance(s: &Scenario, q: &[f64]) -> f64 {
    let v = s.defining_value(q);
    let h = 1e-6;
    let mut g2 = 0.0;
    for i in 0..q.len() {
        let mut a = q.to_vec();
        let mut b = q.to_vec();
        a[i] += h;
        b[i] -= h;
        let d = (s.defining_value(&a) - s.defining_value(&b)) / (2.0 * h);
        g2 += d * d;
    }
    v.abs() / g2.sqrt().max(1e-300)
}

/// Points of `V` on small circles around `p`, by sign changes in angle.
fn circle_samples(pv: &Poly, p: &[f64], r: f64) -> Vec<[f64; 2]> {
    let at = |th: f64| [p[0] + r * th.cos(), p[1] + r * th.sin()];
    let g = |th: f64| pv.eval_f64(&at(th));
    let mut out = Vec::new();
    let step = TAU / ANGLES as f64;
    for k in 0..ANGLES {
        let (mut a, mut b) = (k as f64 * step, (k + 1) as f64 * step);
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            out.push(at(a));
            continue;
        }
        if ga.signum() == gb.signum() || gb == 0.0 {
            continue;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if g(m).signum() == ga.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        out.push(at(0.5 * (a + b)));
    }
    out
}

fn sampling_test(s: &Scenario, pv: &Poly, p: &[f64], tol: f64) -> Verdict {
    let mut worst: f64 = 0.0;
    for r in RADII {
        let samples = circle_samples(pv, p, r);
        if samples.is_empty() {
            return Verdict::NotContained;
        }
        let best = samples.iter().map(|q| normalized_distance(s, q)).fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    if worst <= tol {
        Verdict::Contained
    } else if worst >= SEPARATION {
        Verdict::NotContained
    } else {
        Verdict::Ambiguous
    }
}

/// Whether the set contains an arc of `V` through `p`.
fn germ_contained(s: &Scenario, pv: &Poly, p: &RationalVector, tol: f64) -> Result<bool> {
    let sampled = sampling_test(s, pv, &p.to_f64(), tol);
    let series = series_test(s, pv, p.coords())?;
    match (sampled, series) {
        (Verdict::Contained, None | Some(true)) => Ok(true),
        (Verdict::NotContained, None | Some(false)) => Ok(false),
        _ => Err(Error::ToleranceAmbiguous { point: p.to_string() }),
    }
}

/// Classifies every covered point of a planar scenario as algebraic (an
/// arc of its box's hypersurface through it lies in the set) or
/// transcendental. For algebraic sets the defining equation is tried as a
/// second witness.
pub fn dimension_descent(s: &Scenario, report: &CoveringReport, tol: f64) -> Result<DescentReport> {
    if s.ambient_dim() != 2 {
        return Err(Error::UnsupportedPresentation("dimension descent is implemented for planar scenarios".into()));
    }
    let jobs: Vec<(usize, usize)> = report
        .boxes
        .iter()
        .flat_map(|b| b.points.iter().map(move |&i| (i, b.hypersurface)))
        .collect();
    let polys: Vec<Poly> = report.hypersurfaces.iter().map(|h| h.to_poly()).collect();
    let own = match &s.kind {
        ScenarioKind::Algebraic(q) => Some(q),
        ScenarioKind::Graph(_) => None,
    };
    let classified: Vec<(usize, usize, bool, bool)> = jobs
        .par_iter()
        .map(|&(i, v)| {
            let p = &report.points[i];
            if germ_contained(s, &polys[v], p, tol)? {
                return Ok((i, v, true, false));
            }
            match own {
                Some(q) => germ_contained(s, q, p, tol).map(|c| (i, v, c, c)),
                None => Ok((i, v, false, false)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses: Vec<AlgebraicPartWitness> = classified
        .into_iter()
        .map(|(i, v, c, own)| AlgebraicPartWitness {
            point: report.points[i].clone(),
            hypersurface: v,
            classification: if c { Classification::Algebraic } else { Classification::Transcendental },
            via_defining_equation: own,
        })
        .collect();
    witnesses.sort_by(|a, b| a.point.cmp(&b.point));
    let algebraic = witnesses.iter().filter(|w| w.classification == Classification::Algebraic).count();
    Ok(DescentReport {
        transcendental: witnesses.len() - algebraic,
        algebraic,
        witnesses,
    })
}
