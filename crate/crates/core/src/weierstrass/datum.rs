use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::coideal::{coideal_dim, e_constant, CoIdeal, DEFAULT_K_PROBE};
use super::division::{weierstrass_division, WeierstrassPolynomial};
use crate::analytic::poly::Multi;
use crate::analytic::roots::polynomial_roots;
use crate::analytic::{Polydisc, TaylorModel};
use crate::error::{Error, Result};
use crate::interpolation::basis::{monomial_count, MonomialBasis};
use crate::interval::{up, RatInterval};
use crate::rational::{int, Rational};

/// Affine-unitary coordinates `x = U (p - origin)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frame {
    pub origin: Vec<f64>,
    pub unitary: Vec<Vec<Complex64>>,
}

impl Frame {
    pub fn standard(origin: Vec<f64>) -> Self {
        let n = origin.len();
        let unitary = (0..n)
            .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        Frame { origin, unitary }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionDatum {
    pub frame: Frame,
    pub inner: Polydisc,
    pub outer: Polydisc,
    pub coideal: CoIdeal,
    /// Verified over a finite probe set only: an empirical lower bound for
    /// the true constant.
    pub norm_constant: f64,
    pub e_constant: f64,
}

impl DecompositionDatum {
    pub fn new(inner: Polydisc, outer: Polydisc, coideal: CoIdeal, norm_constant: f64) -> Result<Self> {
        if inner.dim() != coideal.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: coideal.ambient_dim(),
                got: inner.dim(),
            });
        }
        if inner.center() != outer.center() || !outer.contains(&inner) {
            return Err(Error::NotContained);
        }
        if !(norm_constant >= 1.0) {
            return Err(Error::InvalidParameter(format!("norm constant must be >= 1, got {norm_constant}")));
        }
        let frame = Frame::standard(inner.center().iter().map(|c| c.re).collect());
        let e = e_constant(&coideal, DEFAULT_K_PROBE);
        Ok(DecompositionDatum {
            frame,
            inner,
            outer,
            coideal,
            norm_constant,
            e_constant: e,
        })
    }

    /// Datum whose norm constant is the largest ratio observed over
    /// `probes` (at least 1).
    pub fn certify(inner: Polydisc, outer: Polydisc, presentation: &Presentation, probes: &[TaylorModel]) -> Result<Self> {
        let n = inner.dim();
        let mut datum = DecompositionDatum::new(inner, outer, presentation.coideal(n)?, 1.0)?;
        let ratio = verify_norm_constant(&datum, presentation, probes)?;
        datum.norm_constant = ratio.max(1.0);
        Ok(datum)
    }

    pub fn dim(&self) -> usize {
        coideal_dim(&self.coideal)
    }

    pub fn tail_bound(&self, delta: f64, k: u32, m_f: f64) -> Result<f64> {
        tail_bound(self.norm_constant, self.e_constant, self.dim() as u32, delta, k, m_f)
    }
}

/// How the analytic set is presented: as the zeros of a Weierstrass
/// polynomial in the last variable, or as the graph `w = psi(z)`.
#[derive(Debug, Clone)]
pub enum Presentation {
    Weierstrass(WeierstrassPolynomial),
    Graph(TaylorModel),
}

impl Presentation {
    /// The co-ideal whose monomials the decomposition uses.
    pub fn coideal(&self, n: usize) -> Result<CoIdeal> {
        match self {
            Presentation::Weierstrass(f) => {
                if f.nvars() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: f.nvars(),
                    });
                }
                CoIdeal::weierstrass(n, f.degree())
            }
            Presentation::Graph(psi) => {
                if psi.nvars() + 1 != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: psi.nvars() + 1,
                    });
                }
                CoIdeal::weierstrass(n, 1)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub coefficients: BTreeMap<Multi, RatInterval>,
    pub remainder: TaylorModel,
}

fn embed_base(parts: &[(u32, &TaylorModel)], like: &TaylorModel) -> Result<TaylorModel> {
    let w_radius = like.domain().radii()[like.nvars() - 1];
    let mut coeffs = BTreeMap::new();
    let mut tail = 0.0;
    for (j, m) in parts {
        for (beta, c) in m.coeffs() {
            let mut e = beta.clone();
            e.push(*j);
            coeffs.insert(e, c.clone());
        }
        tail += m.tail_bound() * w_radius.powi(*j as i32);
    }
    TaylorModel::from_parts(like.center().to_vec(), like.order(), coeffs, like.domain().clone(), up(tail))
}

/// `F = sum_{a in M} c_a x^a + Q` with `Q` vanishing on the presented set.
pub fn decompose(f: &TaylorModel, presentation: &Presentation, datum: &DecompositionDatum) -> Result<Decomposition> {
    let n = f.nvars();
    if presentation.coideal(n)? != datum.coideal {
        return Err(Error::UnsupportedPresentation(
            "presentation co-ideal differs from the datum co-ideal".into(),
        ));
    }
    let polynomial_part = match presentation {
        Presentation::Weierstrass(w) => {
            let div = weierstrass_division(w, f, f.order())?;
            let parts: Vec<(u32, &TaylorModel)> = div.remainders.iter().enumerate().map(|(j, m)| (j as u32, m)).collect();
            embed_base(&parts, f)?
        }
        Presentation::Graph(psi) => {
            let pull = pullback(f, psi)?;
            embed_base(&[(0, &pull)], f)?
        }
    };
    let remainder = f.sub(&polynomial_part)?;
    Ok(Decomposition {
        coefficients: polynomial_part.coeffs().clone(),
        remainder,
    })
}

/// `F(z, psi(z))` as a model in `z` on the domain of `psi`.
pub fn pullback(f: &TaylorModel, psi: &TaylorModel) -> Result<TaylorModel> {
    let n = f.nvars();
    if psi.nvars() + 1 != n || psi.center() != &f.center()[..n - 1] {
        return Err(Error::UnsupportedPresentation("graph map does not match the function's base".into()));
    }
    let cw = f.center()[n - 1].clone();
    let shift = TaylorModel::constant(cw, psi.center().to_vec(), psi.order(), psi.domain().clone())?;
    let s = psi.sub(&shift)?;
    let rw = f.domain().radii()[n - 1];
    let inside = s.sup_norm_bound(psi.domain())? <= rw;
    let top = f.coeffs().keys().map(|e| e[n - 1]).max().unwrap_or(0);
    let mut powers = vec![TaylorModel::constant(int(1), psi.center().to_vec(), psi.order(), psi.domain().clone())?];
    for _ in 0..top {
        let next = powers.last().unwrap().mul(&s)?;
        powers.push(next);
    }
    let mut acc: BTreeMap<Multi, RatInterval> = BTreeMap::new();
    let mut tail = 0.0;
    for (e, c) in f.coeffs() {
        let p = &powers[e[n - 1] as usize];
        let beta = &e[..n - 1];
        for (pe, pc) in p.coeffs() {
            let ne: Multi = pe.iter().zip(beta).map(|(a, b)| a + b).collect();
            let v = c * pc;
            let v = match acc.remove(&ne) {
                Some(a) => &a + &v,
                None => v,
            };
            acc.insert(ne, v);
        }
        if p.tail_bound() > 0.0 {
            let mono: f64 = beta.iter().zip(psi.domain().radii()).map(|(&k, r)| r.powi(k as i32)).product();
            tail += c.mag_f64() * mono * p.tail_bound();
        }
    }
    if f.tail_bound() > 0.0 {
        tail += f.tail_bound();
    }
    if !inside {
        tail = f64::INFINITY;
    }
    Ok(psi.with_coeffs(acc, up(tail)))
}

/// Largest `|c_a x^a|_inner / |F|_outer` over the probes and their
/// coefficients. Probes of norm zero are skipped.
pub fn verify_norm_constant(datum: &DecompositionDatum, presentation: &Presentation, probes: &[TaylorModel]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for p in probes {
        let nf = p.sup_norm_bound(&datum.outer)?;
        if nf == 0.0 {
            continue;
        }
        let dec = decompose(p, presentation, datum)?;
        for (alpha, c) in &dec.coefficients {
            let mono: f64 = alpha.iter().zip(datum.inner.radii()).map(|(&k, r)| r.powi(k as i32)).product();
            best = best.max(c.mag_f64() * mono / nf);
        }
    }
    Ok(best)
}

/// Monomials of degree `<= degree` as exact models.
pub fn monomial_probes(center: &[Rational], order: u32, domain: &Polydisc, degree: u32) -> Result<Vec<TaylorModel>> {
    let basis = MonomialBasis::new(center.len(), degree)?;
    basis
        .exponents()
        .iter()
        .map(|e| {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(e.clone(), RatInterval::one());
            TaylorModel::from_parts(center.to_vec(), order, coeffs, domain.clone(), 0.0)
        })
        .collect()
}

/// `|D| e L(m, k) / (1 - delta)^m * M delta^k`.
pub fn tail_bound(norm_constant: f64, e: f64, m: u32, delta: f64, k: u32, m_f: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DeltaTooLarge { delta, limit: 1.0 });
    }
    if m == 0 {
        return Err(Error::InvalidParameter("tail bound needs dim M >= 1".into()));
    }
    let l = monomial_count(m as u64, k as u64) as f64;
    Ok(norm_constant * e * l / (1.0 - delta).powi(m as i32) * m_f * delta.powi(k as i32))
}

/// Up to `count` points of the presented set inside `inner`, found by
/// solving the presentation at random base points.
pub fn sample_zero_set(presentation: &Presentation, inner: &Polydisc, count: usize, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    let n = inner.dim();
    let base = inner.project(&(0..n - 1).collect::<Vec<_>>());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let z: Vec<Complex64> = base
            .center()
            .iter()
            .zip(base.radii())
            .map(|(c, r)| {
                let rad = r * rng.gen::<f64>().sqrt();
                c + Complex64::from_polar(rad, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        let ws: Vec<Complex64> = match presentation {
            Presentation::Weierstrass(f) => {
                let mut c = f.coeff_values(&z)?;
                c.push(Complex64::new(1.0, 0.0));
                polynomial_roots(&c)
            }
            Presentation::Graph(psi) => vec![psi.evaluate(&z)?.0],
        };
        for w in ws {
            let mut p = z.clone();
            p.push(w);
            if inner.contains_point(&p) && out.len() < count {
                out.push(p);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{FunctionHandle, Poly};
    use crate::rational::rat;

    const ORDER: u32 = 16;

    fn hyperbola(eps: Rational) -> WeierstrassPolynomial {
        let p = FunctionHandle::parse("w^2 - z^2", &["z", "w"]).unwrap();
        let p = p.as_polynomial().unwrap() + &Poly::constant(2, eps);
        WeierstrassPolynomial::from_poly(&p, vec![int(0)], ORDER, Polydisc::unit(1)).unwrap()
    }

    fn model(src: &str) -> TaylorModel {
        let h = FunctionHandle::parse(src, &["z", "w"]).unwrap();
        h.build_model(&[int(0), int(0)], ORDER, &Polydisc::unit(2)).unwrap()
    }

    fn datum(p: &Presentation) -> DecompositionDatum {
        DecompositionDatum::new(Polydisc::unit(2), Polydisc::unit(2), p.coideal(2).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn w4_against_hyperbola() {
        let eps = rat(1, 3);
        let pres = Presentation::Weierstrass(hyperbola(eps.clone()));
        let d = datum(&pres);
        let dec = decompose(&model("w^4"), &pres, &d).unwrap();
        let mut want = BTreeMap::new();
        want.insert(vec![4, 0], RatInterval::one());
        want.insert(vec![2, 0], RatInterval::point(-&eps * int(2)));
        want.insert(vec![0, 0], RatInterval::point(&eps * &eps));
        assert_eq!(dec.coefficients, want);
        // Q = (w^2 + z^2 - eps) f
        let f = hyperbola(eps.clone()).to_model(&Polydisc::unit(2), ORDER).unwrap();
        let q = model("w^2 + z^2 - 1/3").mul(&f).unwrap();
        assert_eq!(dec.remainder.coeffs(), q.coeffs());
    }

    #[test]
    fn trivial_decompositions() {
        let pres = Presentation::Weierstrass(hyperbola(rat(1, 2)));
        let d = datum(&pres);
        let dec = decompose(&model("z^3*w"), &pres, &d).unwrap();
        assert_eq!(dec.coefficients.len(), 1);
        assert_eq!(dec.coefficients[&vec![3, 1]], RatInterval::one());
        assert!(dec.remainder.is_zero());

        let dec = decompose(&model("w^2 - z^2 + 1/2"), &pres, &d).unwrap();
        assert!(dec.coefficients.is_empty());
        assert_eq!(dec.remainder.coeffs(), model("w^2 - z^2 + 1/2").coeffs());
    }

    #[test]
    fn norm_constant_of_coideal_monomials() {
        let pres = Presentation::Weierstrass(hyperbola(rat(1, 2)));
        let d = datum(&pres);
        let probes: Vec<TaylorModel> = monomial_probes(&[int(0), int(0)], ORDER, &Polydisc::unit(2), 6)
            .unwrap()
            .into_iter()
            .filter(|p| p.coeffs().keys().all(|e| e[1] < 2))
            .collect();
        assert_eq!(verify_norm_constant(&d, &pres, &probes).unwrap(), 1.0);
        let zero = model("0");
        assert_eq!(verify_norm_constant(&d, &pres, &[zero]).unwrap(), 0.0);
    }

    #[test]
    fn hyperbola_norm_constant_uniform() {
        let probes = monomial_probes(&[int(0), int(0)], ORDER, &Polydisc::unit(2), 6).unwrap();
        for k in 0..=10 {
            let pres = Presentation::Weierstrass(hyperbola(rat(k, 10)));
            let r = verify_norm_constant(&datum(&pres), &pres, &probes).unwrap();
            assert!(r <= 4.0, "eps = {k}/10 gives {r}");
        }
        let pres = Presentation::Weierstrass(hyperbola(int(1)));
        assert_eq!(verify_norm_constant(&datum(&pres), &pres, &probes).unwrap(), 3.0);
    }

    #[test]
    fn graph_decomposition() {
        let psi = FunctionHandle::parse("exp(z)", &["z"])
            .unwrap()
            .build_model(&[int(0)], ORDER, &Polydisc::unit(1))
            .unwrap();
        let pres = Presentation::Graph(psi);
        let outer = Polydisc::real(&[0.0, 0.0], &[1.0, 3.0]).unwrap();
        let d = DecompositionDatum::new(Polydisc::unit(2), outer.clone(), pres.coideal(2).unwrap(), 1.0).unwrap();
        let f = FunctionHandle::parse("w^2 - z*w + 1", &["z", "w"])
            .unwrap()
            .build_model(&[int(0), int(0)], ORDER, &outer)
            .unwrap();
        let dec = decompose(&f, &pres, &d).unwrap();
        assert!(dec.coefficients.keys().all(|e| e[1] == 0));
        for p in sample_zero_set(&pres, &Polydisc::unit(2), 50, 7).unwrap() {
            let (v, r) = dec.remainder.evaluate(&p).unwrap();
            assert!(v.norm() <= 1e-10 + r, "{v} at {p:?}");
        }
    }

    #[test]
    fn weierstrass_soundness_by_sampling() {
        let f = hyperbola(rat(1, 4));
        let pres = Presentation::Weierstrass(f);
        let d = datum(&pres);
        let g = model("w^5 - 3*z*w^3 + z^2 + 2");
        let nf = g.sup_norm_bound(&d.outer).unwrap();
        let dec = decompose(&g, &pres, &d).unwrap();
        let pts = sample_zero_set(&pres, &d.inner, 200, 1).unwrap();
        assert_eq!(pts.len(), 200);
        for p in pts {
            assert!(dec.remainder.evaluate(&p).unwrap().0.norm() <= 1e-10 * nf);
        }
    }

    #[test]
    fn tail_bound_values() {
        assert_eq!(tail_bound(1.0, 1.0, 1, 0.5, 0, 1.0).unwrap(), 2.0);
        let v = tail_bound(2.0, 2.0, 1, 0.1, 3, 1.0).unwrap();
        assert!((v - 4.0 / 0.9 * 1e-3).abs() < 1e-15);
        let a = tail_bound(1.5, 2.0, 3, 0.3, 4, 2.0).unwrap();
        let b = tail_bound(1.5, 2.0, 3, 0.3, 5, 2.0).unwrap();
        let step = 0.3 * monomial_count(3, 5) as f64 / monomial_count(3, 4) as f64;
        assert!((b / a - step).abs() < 1e-12);
        assert!(matches!(tail_bound(1.0, 1.0, 1, 1.0, 0, 1.0), Err(Error::DeltaTooLarge { .. })));
    }
}
