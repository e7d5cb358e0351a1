use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::harvest::{harvest_points_bits, DEFAULT_TOL};
use super::scenario::{Certificates, Scenario};
use crate::analytic::RealBox;
use crate::error::{Error, Result};
use crate::interpolation::bounds::vanishing_forced;
use crate::interpolation::hypersurface::select_hypersurface_extended;
use crate::interpolation::{mu, Hypersurface, Selection};
use crate::interval::DEFAULT_PRECISION_BITS;
use crate::rational::{HeightBound, RationalVector};

#[derive(Debug, Clone, Serialize)]
pub struct CoverOptions {
    /// Calibration constant in `delta = min(c_cal, 1/2) H^(-eps/(m+1))`.
    pub c_cal: f64,
    pub max_halvings: u32,
    pub tol: f64,
    pub precision_bits: u32,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            c_cal: 1.0,
            max_halvings: 20,
            tol: DEFAULT_TOL,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

/// Number of cells of side `delta` along each axis.
pub fn grid_shape(bbox: &RealBox, delta: f64) -> Vec<u64> {
    bbox.sides().iter().map(|s| ((s / delta).ceil() as u64).max(1)).collect()
}

pub fn box_budget(bbox: &RealBox, delta: f64) -> u128 {
    grid_shape(bbox, delta).iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
}

fn cell(bbox: &RealBox, delta: f64, index: &[u64]) -> Vec<(f64, f64)> {
    bbox.intervals()
        .iter()
        .zip(index)
        .map(|(&(lo, hi), &i)| (lo + i as f64 * delta, (lo + (i + 1) as f64 * delta).min(hi)))
        .collect()
}

/// Grid of closed boxes of side `<= delta` covering `bbox`.
pub fn subdivide(bbox: &RealBox, delta: f64) -> Result<Vec<RealBox>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let shape = grid_shape(bbox, delta);
    let total = box_budget(bbox, delta);
    if total > 10_000_000 {
        return Err(Error::InvalidParameter(format!("{total} boxes is too many to list")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for mut k in 0..total as u64 {
        let mut index = vec![0; shape.len()];
        for i in (0..shape.len()).rev() {
            index[i] = k % shape[i];
            k /= shape[i];
        }
        out.push(RealBox::new(cell(bbox, delta, &index))?);
    }
    Ok(out)
}

/// Index of the cell containing `x`; points on the far edge go to the last
/// cell.
pub fn cell_index(bbox: &RealBox, delta: f64, x: &[f64]) -> Vec<u64> {
    let shape = grid_shape(bbox, delta);
    bbox.intervals()
        .iter()
        .zip(x)
        .zip(&shape)
        .map(|((&(lo, _), &v), &n)| (((v - lo) / delta).floor().max(0.0) as u64).min(n - 1))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxReport {
    pub index: Vec<u64>,
    pub bounds: Vec<(f64, f64)>,
    /// Indices into the report's point list.
    pub points: Vec<usize>,
    /// Index into the report's hypersurface list.
    pub hypersurface: usize,
    /// Points from outside the box used to pin the hypersurface down.
    pub extra_points_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    /// Every harvested point is annihilated by its box's hypersurface.
    pub covering: bool,
    /// `#hypersurfaces <= #nonempty boxes <= box budget`.
    pub budget: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.covering && self.budget
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub scenario: String,
    pub description: String,
    pub parameter: Option<String>,
    pub height: u64,
    pub eps: f64,
    pub degree: u32,
    pub mu: u64,
    pub delta: f64,
    pub delta_initial: f64,
    pub halvings: u32,
    /// Whether the determinant bounds force vanishing at `delta`.
    pub vanishing_forced: bool,
    pub notes: Vec<String>,
    pub certificates: Certificates,
    pub points: Vec<RationalVector>,
    pub box_budget: u128,
    pub boxes: Vec<BoxReport>,
    pub hypersurfaces: Vec<Hypersurface>,
    pub verdicts: Verdicts,
}

impl CoveringReport {
    /// Points assigned to hypersurface `id`.
    pub fn points_on(&self, id: usize) -> Vec<&RationalVector> {
        self.boxes
            .iter()
            .filter(|b| b.hypersurface == id)
            .flat_map(|b| b.points.iter().map(|&i| &self.points[i]))
            .collect()
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Covers the scenario's points of height `<= h` by hypersurfaces of
/// degree `<= d`, one per nonempty box of side `delta`.
pub fn cover(s: &Scenario, h: HeightBound, eps: f64, d: u32, opts: &CoverOptions) -> Result<CoveringReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !(opts.c_cal > 0.0) {
        return Err(Error::InvalidParameter("calibration constant must be positive".into()));
    }
    let points = harvest_points_bits(s, h, opts.tol, opts.precision_bits)?;
    let cert = s.certificates()?;
    let m = s.m();
    let n = s.ambient_dim();

    let delta_initial = opts.c_cal.min(0.5) * (h.get() as f64).powf(-eps / (m as f64 + 1.0));
    let mut delta = delta_initial;
    let mut halvings = 0;
    let mut forced = false;
    for i in 0..=opts.max_halvings {
        let trial = delta_initial / 2f64.powi(i as i32);
        let ok = vanishing_forced(trial, h.get(), cert.m_bound, d, m, cert.e_constant, cert.norm_constant).unwrap_or(false);
        if ok {
            delta = trial;
            halvings = i;
            forced = true;
            break;
        }
    }
    let mut notes = Vec::new();
    if !forced {
        notes.push(format!(
            "degree {d} insufficient at this eps: vanishing not forced after {} halvings; using the initial delta",
            opts.max_halvings
        ));
    }

    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.to_f64()).collect();
    let mut buckets: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, x) in coords.iter().enumerate() {
        buckets.entry(cell_index(&s.bbox, delta, x)).or_default().push(i);
    }
    let boxes: Vec<(Vec<u64>, Vec<usize>)> = buckets.into_iter().collect();
    let selections: Vec<Result<(Selection, usize)>> = boxes
        .par_iter()
        .map(|(index, members)| {
            let bounds = cell(&s.bbox, delta, index);
            let center: Vec<f64> = bounds.iter().map(|(a, b)| (a + b) / 2.0).collect();
            let mut others: Vec<usize> = (0..points.len()).filter(|i| !members.contains(i)).collect();
            others.sort_by(|&a, &b| dist2(&coords[a], &center).total_cmp(&dist2(&coords[b], &center)).then(a.cmp(&b)));
            let inside: Vec<RationalVector> = members.iter().map(|&i| points[i].clone()).collect();
            let extra: Vec<RationalVector> = others.iter().map(|&i| points[i].clone()).collect();
            select_hypersurface_extended(&inside, &extra, d)
        })
        .collect();

    let mut dedup: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    let mut hypersurfaces: Vec<Hypersurface> = Vec::new();
    let mut reports = Vec::with_capacity(boxes.len());
    for ((index, members), sel) in boxes.into_iter().zip(selections) {
        let (sel, extra) = sel?;
        let hs = match sel {
            Selection::Hypersurface(hs) => hs,
            Selection::Independent => {
                return Err(Error::BoxRequiresHigherDegree {
                    index,
                    points: members.len(),
                    degree: d,
                })
            }
        };
        let id = *dedup.entry(hs.coefficients().to_vec()).or_insert_with(|| {
            hypersurfaces.push(hs.clone());
            hypersurfaces.len() - 1
        });
        reports.push(BoxReport {
            bounds: cell(&s.bbox, delta, &index),
            index,
            points: members,
            hypersurface: id,
            extra_points_used: extra,
        });
    }

    let covering = reports
        .iter()
        .all(|b| b.points.iter().all(|&i| hypersurfaces[b.hypersurface].contains(&points[i])));
    let budget_count = box_budget(&s.bbox, delta);
    let budget = hypersurfaces.len() <= reports.len() && (reports.len() as u128) <= budget_count;
    debug_assert_eq!(n, s.bbox.dim());
    Ok(CoveringReport {
        scenario: s.name.clone(),
        description: s.description(),
        parameter: s.parameter.as_ref().map(|p| p.to_string()),
        height: h.get(),
        eps,
        degree: d,
        mu: mu(m as u64, d as u64) as u64,
        delta,
        delta_initial,
        halvings,
        vanishing_forced: forced,
        notes,
        certificates: cert,
        points,
        box_budget: budget_count,
        boxes: reports,
        hypersurfaces,
        verdicts: Verdicts { covering, budget },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::scenario::{resolve, ScenarioRef};

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
    fn subdivision_counts() {
        let unit = RealBox::new(vec![(0.0, 1.0)]).unwrap();
        assert_eq!(subdivide(&unit, 0.25).unwrap().len(), 4);
        let sq = RealBox::new(vec![(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(subdivide(&sq, 0.5).unwrap().len(), 4);
        assert_eq!(subdivide(&sq, 2.0).unwrap().len(), 1);
        let b = subdivide(&RealBox::new(vec![(0.0, 1.0)]).unwrap(), 0.3).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b[3].intervals()[0].1, 1.0);
    }

    #[test]
    fn circle_cover() {
        let r = cover(&scenario("circle"), hb(5), 1.0, 2, &CoverOptions::default()).unwrap();
        assert_eq!(r.points.len(), 12);
        assert!(r.verdicts.all());
        assert_eq!(r.hypersurfaces.len(), 1);
        let want: Vec<BigInt> = [1, 0, 0, -1, 0, -1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(r.hypersurfaces[0].coefficients(), &want[..]);
    }

    #[test]
    fn exp_cover_single_point() {
        let r = cover(&scenario("exp_graph"), hb(10), 1.0, 2, &CoverOptions::default()).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(r.hypersurfaces.len() <= 1);
        assert!(r.verdicts.all());
    }

    #[test]
    fn empty_box_report() {
        let s = resolve("circle", Some("2,3,2,3")).unwrap();
        let ScenarioRef::Single(s) = s else { panic!() };
        let r = cover(&s, hb(5), 1.0, 2, &CoverOptions::default()).unwrap();
        assert!(r.points.is_empty() && r.boxes.is_empty() && r.hypersurfaces.is_empty());
        assert!(r.verdicts.all());
    }

    #[test]
    fn degree_one_fails_on_a_dense_circle_box() {
        // (3/5, 4/5), (4/5, 3/5), (20/29, 21/29), (21/29, 20/29) share a cell
        let opts = CoverOptions {
            max_halvings: 0,
            ..CoverOptions::default()
        };
        let e = cover(&scenario("circle"), hb(30), 0.001, 1, &opts).unwrap_err();
        assert!(matches!(e, Error::BoxRequiresHigherDegree { degree: 1, .. }));
    }

    #[test]
    fn hyperbola_members_single_conic() {
        for eps in ["1", "1/10", "1/100", "0"] {
            let r = cover(&scenario(&format!("hyperbola:{eps}")), hb(20), 1.0, 2, &CoverOptions::default()).unwrap();
            assert!(r.verdicts.all());
            assert!(r.hypersurfaces.len() <= 1, "eps {eps}: {:?}", r.hypersurfaces);
        }
    }
}
