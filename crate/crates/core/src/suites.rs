//! Seeded checks of the determinant bounds, the staircase combinatorics,
//! root counting and division. Each item draws from its own ChaCha stream
//! selected by its index, so results do not depend on scheduling.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{FunctionHandle, Poly, PolyDisplay, Polydisc, TaylorModel};
use crate::error::{Error, Result};
use crate::explorer::sweep::unit_bidisc_norms;
use crate::explorer::{harvest_points, resolve, Scenario, ScenarioRef};
use crate::interpolation::{
    det_rational, lower_bound, monomial_count, monomial_row_exact, mu, poly_interp_det, upper_bound_curve, DetSign,
    MonomialBasis,
};
use crate::rational::{int, rat, to_f64, HeightBound, Rational, RationalVector};
use crate::weierstrass::{
    certify_weierstrass_polydisc, coideal_dim, division_residual, e_constant_witness, hilbert_samuel,
    residual_vanishes_through, weierstrass_division, CoIdeal, WeierstrassPolynomial, WindingCertificate,
};

pub const LOWER_SCENARIOS: [&str; 3] = ["circle", "parabola", "line"];

fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowVerdict {
    Pass,
    Zero,
    Violation,
}

/// One determinant checked against its bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub id: usize,
    pub scenario: String,
    pub degree: u32,
    pub delta: Option<f64>,
    pub height: u64,
    pub value: String,
    pub radius: f64,
    pub sign: DetSign,
    pub upper: Option<f64>,
    pub lower: Option<String>,
    pub verdict: RowVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSuite {
    pub suite: String,
    pub seed: u64,
    pub rows: Vec<BoundRow>,
    pub violations: usize,
    pub zeros: usize,
    pub indeterminate: usize,
}

impl BoundSuite {
    fn new(suite: &str, seed: u64, rows: Vec<BoundRow>) -> Self {
        let count = |v| rows.iter().filter(|r| r.verdict == v).count();
        BoundSuite {
            suite: suite.into(),
            seed,
            violations: count(RowVerdict::Violation),
            zeros: count(RowVerdict::Zero),
            indeterminate: rows.iter().filter(|r| r.sign == DetSign::IndeterminateSign).count(),
            rows,
        }
    }
}

/// Exact polynomial interpolation determinants of random tuples of
/// harvested points, each nonzero one compared with `H^{-(m+1) d mu}` at
/// the tuple's own height.
pub fn lower_bound_suite(h: u64, tuples: usize, seed: u64) -> Result<BoundSuite> {
    let hb = HeightBound::new(h)?;
    let mut pools = Vec::new();
    for name in LOWER_SCENARIOS {
        let ScenarioRef::Single(s) = resolve(name, None)? else {
            unreachable!("built-in curves are single scenarios")
        };
        pools.push(harvest_points(&s, hb, crate::explorer::harvest::DEFAULT_TOL)?);
    }
    let rows: Vec<BoundRow> = (0..tuples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let which = i % LOWER_SCENARIOS.len();
            let d = 1 + ((i / LOWER_SCENARIOS.len()) % 2) as u32;
            let size = mu(1, d as u64) as usize;
            let pool = &pools[which];
            if pool.len() < size {
                return Err(Error::InvalidParameter(format!("only {} points on {}", pool.len(), LOWER_SCENARIOS[which])));
            }
            let pts: Vec<&RationalVector> = pool.choose_multiple(&mut rng, size).collect();
            let basis = MonomialBasis::new(2, d)?;
            let matrix: Vec<Vec<Rational>> = pts.iter().map(|p| monomial_row_exact(&basis, p.coords())).collect();
            let det = det_rational(&matrix);
            let height = pts.iter().map(|p| p.height()).max().unwrap_or_default();
            let height = u64::try_from(height).expect("harvested heights are bounded");
            let bound = lower_bound(height, 1, d, size as u64);
            let verdict = if det.is_zero() {
                RowVerdict::Zero
            } else if det.abs() >= bound {
                RowVerdict::Pass
            } else {
                RowVerdict::Violation
            };
            Ok(BoundRow {
                id: i,
                scenario: LOWER_SCENARIOS[which].into(),
                degree: d,
                delta: None,
                height,
                value: det.to_string(),
                radius: 0.0,
                sign: if det.is_zero() {
                    DetSign::Zero
                } else if det.is_positive() {
                    DetSign::Positive
                } else {
                    DetSign::Negative
                },
                upper: None,
                lower: Some(bound.to_string()),
                verdict,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BoundSuite::new("lower", seed, rows))
}

/// Majorant of `(t, e^t)` on the disc of radius 2 around `c`.
pub fn exp_curve_majorant(c: &Rational) -> Result<f64> {
    let disc = Polydisc::real(&[to_f64(c)], &[2.0])?;
    let model = FunctionHandle::parse("exp(t)", &["t"])?.build_model(std::slice::from_ref(c), 40, &disc)?;
    Ok(model.sup_norm_bound(&disc)?.max(to_f64(c).abs() + 2.0))
}

/// Enclosed determinants for `(t, e^t)` at dyadic points of an interval of
/// length `delta` in `[0, 1]`, compared with the curve upper bound through
/// `|value| + radius`. Determinants of unknown sign are compared too.
pub fn upper_bound_suite(degrees: &[u32], deltas: &[f64], per_pair: usize, seed: u64, bits: u32) -> Result<BoundSuite> {
    const GRID: u32 = 30;
    let curve = [FunctionHandle::parse("t", &["t"])?, FunctionHandle::parse("exp(t)", &["t"])?];
    let mut jobs = Vec::new();
    for &d in degrees {
        for &delta in deltas {
            if !(delta > 0.0 && delta < 0.5) {
                return Err(Error::DeltaTooLarge { delta, limit: 0.5 });
            }
            for _ in 0..per_pair {
                jobs.push((d, delta));
            }
        }
    }
    let scale = Rational::from_integer(num_bigint::BigInt::from(1u64 << GRID));
    let rows: Vec<BoundRow> = jobs
        .par_iter()
        .enumerate()
        .map(|(i, &(d, delta))| {
            let mut rng = stream(seed, i);
            let size = mu(1, d as u64) as usize;
            let span = (delta * f64::from(1u32 << GRID)).floor() as i64;
            let a = rng.gen_range(0..=(1i64 << GRID) - span);
            let mut ks: Vec<i64> = rand::seq::index::sample(&mut rng, span as usize + 1, size).into_iter().map(|k| k as i64).collect();
            ks.sort_unstable();
            let pts: Vec<RationalVector> = ks
                .iter()
                .map(|k| RationalVector::new(vec![int(a + k) / &scale]))
                .collect::<Result<_>>()?;
            let center = (int(2 * a + span)) / (&scale * int(2));
            let m_bound = exp_curve_majorant(&center)?;
            let det = poly_interp_det(d, &curve, &pts, bits)?;
            let upper = upper_bound_curve(size as u64, m_bound, d, delta)?;
            let sign = det.sign();
            let verdict = if det.abs_upper() <= upper {
                if sign == DetSign::Zero {
                    RowVerdict::Zero
                } else {
                    RowVerdict::Pass
                }
            } else {
                RowVerdict::Violation
            };
            let height = pts.iter().map(|p| p.height()).max().unwrap_or_default();
            Ok(BoundRow {
                id: i,
                scenario: "exp_curve".into(),
                degree: d,
                delta: Some(delta),
                height: u64::try_from(height).expect("dyadic heights fit"),
                value: format!("{:e}", to_f64(&det.value)),
                radius: det.radius,
                sign,
                upper: Some(upper),
                lower: None,
                verdict,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BoundSuite::new("upper", seed, rows))
}

/// Hilbert–Samuel values of one staircase against a lattice count.
#[derive(Debug, Clone, Serialize)]
pub struct StaircaseRow {
    pub id: usize,
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
    pub dim: usize,
    pub formula: Vec<u128>,
    pub brute: Vec<u128>,
    pub e_constant: f64,
    pub witness_k: u32,
    pub inequality_holds: bool,
    pub equality_attained: bool,
}

impl StaircaseRow {
    pub fn ok(&self) -> bool {
        self.formula == self.brute && self.inequality_holds && self.equality_attained
    }
}

fn brute_hilbert(m: &CoIdeal, k: u32) -> u128 {
    fn rec(m: &CoIdeal, prefix: &mut Vec<u32>, left: u32, n: usize) -> u128 {
        if prefix.len() == n {
            return u128::from(m.contains(prefix).expect("matching arity"));
        }
        let mut total = 0;
        for a in 0..=left {
            prefix.push(a);
            total += rec(m, prefix, left - a, n);
            prefix.pop();
        }
        total
    }
    rec(m, &mut Vec::new(), k, m.ambient_dim())
}

/// Random staircases in at most four variables with at most five
/// generators, checked for `k <= k_max`.
pub fn staircase_suite(count: usize, seed: u64, k_max: u32) -> Result<Vec<StaircaseRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let n = rng.gen_range(1..=4usize);
            let g = rng.gen_range(1..=5usize);
            let gens: Vec<Vec<u32>> = (0..g).map(|_| (0..n).map(|_| rng.gen_range(0..=4)).collect()).collect();
            let m = CoIdeal::new(n, gens)?;
            let formula: Vec<u128> = (0..=k_max).map(|k| hilbert_samuel(&m, k)).collect();
            let brute: Vec<u128> = (0..=k_max).map(|k| brute_hilbert(&m, k)).collect();
            let dim = coideal_dim(&m);
            let (e, witness_k) = e_constant_witness(&m, k_max);
            let (inequality_holds, equality_attained) = if dim == 0 {
                let size = *formula.last().unwrap_or(&0);
                let stable = formula.windows(2).last().is_none_or(|w| w[0] == w[1]);
                (stable && size as f64 <= e, size as f64 == e)
            } else {
                let mut ok = true;
                let mut hit = false;
                for k in 0..=k_max as usize {
                    let layer = formula[k] - if k == 0 { 0 } else { formula[k - 1] };
                    let l = monomial_count(dim as u64, k as u64) as f64;
                    ok &= layer as f64 <= e * l * (1.0 + 1e-12);
                    hit |= (layer as f64 - e * l).abs() <= 1e-12 * e * l;
                }
                (ok, hit)
            };
            Ok(StaircaseRow {
                id: i,
                n,
                generators: m.generators().to_vec(),
                dim,
                formula,
                brute,
                e_constant: e,
                witness_k,
                inequality_holds,
                equality_attained,
            })
        })
        .collect()
}

/// Root count of a univariate polynomial certified on a disc, against the
/// staircase constant of its Weierstrass datum.
#[derive(Debug, Clone, Serialize)]
pub struct RootCountRow {
    pub id: usize,
    pub degree: u32,
    pub roots: Vec<String>,
    pub certified: u32,
    pub e_constant: f64,
}

/// Products of `degree <= 5` distinct linear factors with rational roots
/// in `(-4/5, 4/5)`, certified on the unit disc.
pub fn root_count_suite(count: usize, seed: u64) -> Result<Vec<RootCountRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let degree = 1 + (i % 5) as u32;
            let mut numerators: Vec<i64> = (-8..=8).collect();
            numerators.shuffle(&mut rng);
            let roots: Vec<Rational> = numerators[..degree as usize].iter().map(|&k| rat(k, 10)).collect();
            let w = Poly::var(1, 0);
            let mut p = Poly::constant(1, int(1));
            for r in &roots {
                p = &p * &(&w - &Poly::constant(1, r.clone()));
            }
            let disc = Polydisc::unit(1);
            let f = TaylorModel::from_poly(&p, vec![int(0)], degree, disc.clone())?;
            let empty = Polydisc::new(vec![], vec![])?;
            let cert: WindingCertificate = certify_weierstrass_polydisc(&f, &empty, &disc, 1, 256)?;
            let (e, _) = e_constant_witness(&CoIdeal::weierstrass(1, cert.degree)?, 0);
            Ok(RootCountRow {
                id: i,
                degree,
                roots: roots.iter().map(|r| r.to_string()).collect(),
                certified: cert.degree,
                e_constant: e,
            })
        })
        .collect()
}

/// Outcome of one exact division.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub id: usize,
    pub f: String,
    pub g: String,
    pub order: u32,
    pub degree: u32,
    pub vanishes: bool,
}

const ZW: [&str; 2] = ["z", "w"];

fn random_poly(rng: &mut ChaCha8Rng, deg_z: u32, deg_w: u32) -> Poly {
    let mut p = Poly::zero(2);
    for a in 0..=deg_z {
        for b in 0..=deg_w {
            if rng.gen_bool(0.6) {
                p.add_term(vec![a, b], rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)));
            }
        }
    }
    p
}

/// Divides random polynomials by random monic-in-`w` polynomials with
/// `order` and checks that the residual vanishes through `order - d`.
pub fn residual_suite(count: usize, seed: u64, order: u32) -> Result<Vec<ResidualRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let d = rng.gen_range(1..=3u32);
            let mut f = random_poly(&mut rng, 3, d - 1);
            f.add_term(vec![0, d], int(1));
            let g = random_poly(&mut rng, 4, 5);
            let base = Polydisc::unit(1);
            let wf = WeierstrassPolynomial::from_poly(&f, vec![int(0)], order, base)?;
            let gm = TaylorModel::from_poly(&g, vec![int(0), int(0)], order, Polydisc::unit(2))?;
            let div = weierstrass_division(&wf, &gm, order)?;
            let res = division_residual(&wf, &gm, &div)?;
            Ok(ResidualRow {
                id: i,
                f: PolyDisplay { poly: &f, names: &ZW }.to_string(),
                g: PolyDisplay { poly: &g, names: &ZW }.to_string(),
                order,
                degree: d,
                vanishes: residual_vanishes_through(&res, order - d),
            })
        })
        .collect()
}

/// Norm constant and raw division ratio of `w^2 - z^2 + eps` on the unit
/// bidisc.
#[derive(Debug, Clone, Serialize)]
pub struct HyperbolaRow {
    pub eps: String,
    pub norm_constant: f64,
    pub division_ratio: f64,
}

pub fn hyperbola_suite(params: &[Rational]) -> Result<Vec<HyperbolaRow>> {
    params
        .par_iter()
        .map(|eps| {
            let (norm_constant, division_ratio) = unit_bidisc_norms(&Scenario::hyperbola(eps.clone()))?;
            Ok(HyperbolaRow {
                eps: eps.to_string(),
                norm_constant,
                division_ratio,
            })
        })
        .collect()
}

/// `1, 1/10, .., 10^-6, 0`.
pub fn hyperbola_params() -> Vec<Rational> {
    let mut v: Vec<Rational> = (0..=6).map(|k| Rational::new(1.into(), num_bigint::BigInt::from(10).pow(k))).collect();
    v.push(Rational::zero());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_small() {
        let s = lower_bound_suite(20, 60, 1).unwrap();
        assert_eq!(s.rows.len(), 60);
        assert_eq!(s.violations, 0);
        assert!(s.zeros > 0 && s.zeros < 60);
    }

    #[test]
    fn lower_deterministic() {
        let a = lower_bound_suite(20, 30, 9).unwrap();
        let b = lower_bound_suite(20, 30, 9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn upper_small() {
        let s = upper_bound_suite(&[2], &[0.1], 10, 3, 256).unwrap();
        assert_eq!(s.violations, 0);
        assert!(upper_bound_suite(&[2], &[0.6], 1, 3, 256).is_err());
    }

    #[test]
    fn majorant_exceeds_exp() {
        let m = exp_curve_majorant(&rat(1, 2)).unwrap();
        assert!(m >= 2.5f64.exp());
    }

    #[test]
    fn staircases() {
        for r in staircase_suite(10, 5, 12).unwrap() {
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn roots_and_residuals() {
        for r in root_count_suite(10, 2).unwrap() {
            assert_eq!(r.certified, r.degree);
            assert_eq!(r.e_constant, r.degree as f64);
        }
        assert!(residual_suite(5, 4, 12).unwrap().iter().all(|r| r.vanishes));
    }
}
