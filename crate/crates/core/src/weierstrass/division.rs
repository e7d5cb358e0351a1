use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::analytic::poly::{total_degree, Multi, Poly};
use crate::analytic::{Polydisc, TaylorModel};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::rational::Rational;

/// `w^d + a_{d-1}(z) w^{d-1} + ... + a_0(z)`, with `w` the last variable.
/// The coefficients are models in the remaining variables and share one
/// center and domain.
#[derive(Debug, Clone)]
pub struct WeierstrassPolynomial {
    coeffs: Vec<TaylorModel>,
}

impl WeierstrassPolynomial {
    pub fn new(coeffs: Vec<TaylorModel>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("Weierstrass polynomial needs degree >= 1".into()));
        }
        let first = &coeffs[0];
        for c in &coeffs[1..] {
            if c.center() != first.center() || c.domain() != first.domain() {
                return Err(Error::InvalidParameter("coefficients must share center and domain".into()));
            }
        }
        Ok(WeierstrassPolynomial { coeffs })
    }

    /// Reads a polynomial in `(z, w)` as a Weierstrass polynomial in the last
    /// variable. The leading coefficient in `w` must be a nonzero constant;
    /// it is divided out.
    pub fn from_poly(p: &Poly, z_center: Vec<Rational>, order: u32, base: Polydisc) -> Result<Self> {
        let n = p.nvars();
        if n == 0 || z_center.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n.saturating_sub(1),
                got: z_center.len(),
            });
        }
        let d = p.degree_in(n - 1);
        if d == 0 {
            return Err(Error::InvalidParameter("polynomial does not involve the last variable".into()));
        }
        let lead = p.coeff_in(n - 1, d);
        if lead.degree() > 0 || lead.is_zero() {
            return Err(Error::UnsupportedPresentation(
                "leading coefficient in w is not a nonzero constant".into(),
            ));
        }
        let inv = Rational::one() / lead.coefficient(&vec![0; n]);
        let mut coeffs = Vec::with_capacity(d as usize);
        for i in 0..d {
            let a = drop_last(&p.coeff_in(n - 1, i)).scale(&inv);
            coeffs.push(TaylorModel::from_poly(&a, z_center.clone(), order, base.clone())?);
        }
        WeierstrassPolynomial::new(coeffs)
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// `a_0, .., a_{d-1}`.
    pub fn coeffs(&self) -> &[TaylorModel] {
        &self.coeffs
    }

    /// Number of variables including `w`.
    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars() + 1
    }

    pub fn base_center(&self) -> &[Rational] {
        self.coeffs[0].center()
    }

    pub fn base_domain(&self) -> &Polydisc {
        self.coeffs[0].domain()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(|c| c.tail_bound() == 0.0)
    }

    /// The polynomial as a model in all variables on `domain`, whose last
    /// coordinate must be centered at `w = 0`.
    pub fn to_model(&self, domain: &Polydisc, order: u32) -> Result<TaylorModel> {
        let n = self.nvars();
        let mut center = self.base_center().to_vec();
        center.push(Rational::zero());
        let mut coeffs = BTreeMap::new();
        let mut lead = vec![0; n];
        lead[n - 1] = self.degree();
        coeffs.insert(lead, RatInterval::one());
        let mut tail = 0.0;
        let w_radius = domain.radii()[n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (beta, c) in a.coeffs() {
                let mut e = beta.clone();
                e.push(i as u32);
                coeffs.insert(e, c.clone());
            }
            tail += a.tail_bound() * w_radius.powi(i as i32);
        }
        TaylorModel::from_parts(center, order, coeffs, domain.clone(), crate::interval::up(tail))
    }

    /// Values `a_i(z)` at a complex base point, midpoints only.
    pub fn coeff_values(&self, z: &[num_complex::Complex64]) -> Result<Vec<num_complex::Complex64>> {
        self.coeffs.iter().map(|a| a.evaluate(z).map(|v| v.0)).collect()
    }
}

fn drop_last(p: &Poly) -> Poly {
    let n = p.nvars();
    Poly::from_terms(
        n - 1,
        p.terms().iter().map(|(e, c)| (e[..n - 1].to_vec(), c.clone())),
    )
}

/// Quotient, remainders and the observed norm ratio of one division.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotient: TaylorModel,
    /// `g_0, .., g_{d-1}`, models in the base variables.
    pub remainders: Vec<TaylorModel>,
    /// `max(|g_j|, |q|) / |g|` on the domain of `g`; zero when `g = 0`.
    pub norm_ratio: f64,
}

fn add_into(map: &mut BTreeMap<Multi, RatInterval>, e: Multi, v: RatInterval) {
    let sum = match map.remove(&e) {
        Some(a) => &a + &v,
        None => v,
    };
    if !sum.is_zero() {
        map.insert(e, sum);
    }
}

/// Long division of `g` by `f` in the last variable:
/// `g = q f + sum_j g_j w^j`.
///
/// `g` is truncated at total order `k`. The polynomial part is divided
/// exactly; terms of the results above order `k` are kept in their tails.
/// Remainders of `g` or of the coefficients of `f` are not propagated and
/// give infinite tails.
pub fn weierstrass_division(f: &WeierstrassPolynomial, g: &TaylorModel, k: u32) -> Result<Division> {
    let n = f.nvars();
    let d = f.degree();
    if g.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.nvars(),
        });
    }
    if k < d {
        return Err(Error::TruncationTooSmall { order: k, degree: d as usize });
    }
    if !g.center()[n - 1].is_zero() || g.center()[..n - 1] != *f.base_center() {
        return Err(Error::InvalidParameter("dividend and divisor use different centers".into()));
    }
    let base_idx: Vec<usize> = (0..n - 1).collect();
    let base = g.domain().project(&base_idx);
    if !f.base_domain().contains(&base) {
        return Err(Error::NotContained);
    }
    let g = g.truncate(k);
    let exact = g.tail_bound() == 0.0 && f.is_exact();

    let mut work: BTreeMap<Multi, RatInterval> = g.coeffs().clone();
    let mut quotient: BTreeMap<Multi, RatInterval> = BTreeMap::new();
    let top = work.keys().map(|e| e[n - 1]).max().unwrap_or(0);
    for j in (d..=top).rev() {
        let row: Vec<(Multi, RatInterval)> = work
            .iter()
            .filter(|(e, _)| e[n - 1] == j)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        for (e, c) in row {
            work.remove(&e);
            let mut qe = e.clone();
            qe[n - 1] = j - d;
            add_into(&mut quotient, qe, c.clone());
            for (i, a) in f.coeffs().iter().enumerate() {
                for (beta, ac) in a.coeffs() {
                    let mut ne: Multi = e[..n - 1].iter().zip(beta).map(|(x, y)| x + y).collect();
                    ne.push(j - d + i as u32);
                    add_into(&mut work, ne, -&(&c * ac));
                }
            }
        }
    }
    let mut rem: Vec<BTreeMap<Multi, RatInterval>> = vec![BTreeMap::new(); d as usize];
    for (e, c) in work {
        rem[e[n - 1] as usize].insert(e[..n - 1].to_vec(), c);
    }
    let tail = if exact { 0.0 } else { f64::INFINITY };
    let quotient = TaylorModel::from_parts(g.center().to_vec(), k, quotient, g.domain().clone(), tail)?;
    let remainders = rem
        .into_iter()
        .map(|c| TaylorModel::from_parts(f.base_center().to_vec(), k, c, base.clone(), tail))
        .collect::<Result<Vec<_>>>()?;

    let gn = g.sup_norm_bound(g.domain())?;
    let norm_ratio = if gn == 0.0 {
        0.0
    } else {
        let mut top = quotient.sup_norm_bound(g.domain())?;
        for r in &remainders {
            top = top.max(r.sup_norm_bound(&base)?);
        }
        top / gn
    };
    Ok(Division {
        quotient,
        remainders,
        norm_ratio,
    })
}

/// `g - (q f + sum_j g_j w^j)` as a coefficient map, computed exactly.
pub fn division_residual(f: &WeierstrassPolynomial, g: &TaylorModel, div: &Division) -> Result<BTreeMap<Multi, RatInterval>> {
    let n = f.nvars();
    let mut out = g.coeffs().clone();
    let mut fc: Vec<(Multi, RatInterval)> = Vec::new();
    let mut lead = vec![0; n];
    lead[n - 1] = f.degree();
    fc.push((lead, RatInterval::one()));
    for (i, a) in f.coeffs().iter().enumerate() {
        for (beta, c) in a.coeffs() {
            let mut e = beta.clone();
            e.push(i as u32);
            fc.push((e, c.clone()));
        }
    }
    for (qe, qc) in div.quotient.coeffs() {
        for (fe, fcv) in &fc {
            let e: Multi = qe.iter().zip(fe).map(|(a, b)| a + b).collect();
            add_into(&mut out, e, -&(qc * fcv));
        }
    }
    for (j, r) in div.remainders.iter().enumerate() {
        for (beta, c) in r.coeffs() {
            let mut e = beta.clone();
            e.push(j as u32);
            add_into(&mut out, e, -c);
        }
    }
    Ok(out)
}

/// True when every residual coefficient of total degree `<= order` is
/// exactly zero, or an interval containing zero for inexact data.
pub fn residual_vanishes_through(res: &BTreeMap<Multi, RatInterval>, order: u32) -> bool {
    res.iter()
        .filter(|(e, _)| total_degree(e) <= order)
        .all(|(_, c)| c.contains_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FunctionHandle;
    use crate::rational::{int, rat};

    fn hyperbola(eps: Rational) -> WeierstrassPolynomial {
        let p = FunctionHandle::parse("w^2 - z^2", &["z", "w"]).unwrap();
        let p = p.as_polynomial().unwrap() + &Poly::constant(2, eps);
        WeierstrassPolynomial::from_poly(&p, vec![int(0)], 12, Polydisc::unit(1)).unwrap()
    }

    fn model(src: &str) -> TaylorModel {
        let h = FunctionHandle::parse(src, &["z", "w"]).unwrap();
        h.build_model(&[int(0), int(0)], 12, &Polydisc::unit(2)).unwrap()
    }

    fn poly1(m: &TaylorModel) -> Poly {
        m.midpoint_poly()
    }

    #[test]
    fn cube_by_hyperbola() {
        let eps = rat(1, 3);
        let f = hyperbola(eps.clone());
        let div = weierstrass_division(&f, &model("w^3"), 12).unwrap();
        assert_eq!(poly1(&div.quotient), Poly::var(2, 1));
        assert!(div.remainders[0].is_zero());
        let want = FunctionHandle::parse("z^2 - 1/3", &["z"]).unwrap();
        assert_eq!(&poly1(&div.remainders[1]), want.as_polynomial().unwrap());
        assert!(div.quotient.tail_bound() == 0.0);
    }

    #[test]
    fn square_and_base_only() {
        let f = hyperbola(rat(1, 2));
        let div = weierstrass_division(&f, &model("w^2"), 12).unwrap();
        assert_eq!(poly1(&div.quotient), Poly::constant(2, int(1)));
        let want = FunctionHandle::parse("z^2 - 1/2", &["z"]).unwrap();
        assert_eq!(&poly1(&div.remainders[0]), want.as_polynomial().unwrap());
        assert!(div.remainders[1].is_zero());

        let div = weierstrass_division(&f, &model("3*z^5 - z + 2"), 12).unwrap();
        assert!(div.quotient.is_zero());
        let want = FunctionHandle::parse("3*z^5 - z + 2", &["z"]).unwrap();
        assert_eq!(&poly1(&div.remainders[0]), want.as_polynomial().unwrap());
    }

    #[test]
    fn order_below_degree() {
        let f = hyperbola(rat(1, 2));
        assert!(matches!(
            weierstrass_division(&f, &model("w"), 1),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn residual_of_mixed_dividend() {
        let f = hyperbola(rat(1, 5));
        let g = model("w^5*z - 2*w^3 + z^4*w + 7");
        let div = weierstrass_division(&f, &g, 12).unwrap();
        let res = division_residual(&f, &g, &div).unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn exp_dividend_residual() {
        let f = hyperbola(rat(1, 4));
        let g = model("exp(1*w) + exp(2*z)");
        let div = weierstrass_division(&f, &g, 10).unwrap();
        let res = division_residual(&f, &g, &div).unwrap();
        assert!(residual_vanishes_through(&res, 8));
        assert!(div.quotient.tail_bound().is_infinite());
    }
}
