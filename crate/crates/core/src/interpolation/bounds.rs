//! Upper bounds for interpolation determinants at nearby points and the
//! lower bound for determinants at rational points of bounded height.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::basis::{monomial_count, mu as mu_of};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DeltaTooLarge { delta, limit: 0.5 });
    }
    Ok(())
}

/// `ln` of [`upper_bound_curve`].
pub fn ln_upper_bound_curve(mu: u64, m_bound: f64, d: u32, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let mu_f = mu as f64;
    Ok(ln_factorial(mu) + mu_f * (2.0 * mu_f + 2.0).ln() + (d as f64) * mu_f * m_bound.ln() + mu_f * mu_f / 2.0 * delta.ln())
}

/// `mu! (2 mu + 2)^mu M^(d mu) delta^(mu^2 / 2)`: the bound for a curve
/// parametrized over an interval of length `delta`.
pub fn upper_bound_curve(mu: u64, m_bound: f64, d: u32, delta: f64) -> Result<f64> {
    Ok(ln_upper_bound_curve(mu, m_bound, d, delta)?.exp())
}

/// The pieces of the bound for a set admitting a decomposition of
/// dimension `m`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralBound {
    /// Order of the last monomial layer used.
    pub k: u32,
    pub c0: f64,
    /// Exponent of `delta`.
    pub s: f64,
    pub ln_value: f64,
    pub value: f64,
}

/// `mu^mu mu! C0^mu delta^S` where
/// `k = max{j : sum_{l <= j} e L(m, l) < mu}`,
/// `C0 = |D| e L(m, k) / (1 - delta)^m * M` and
/// `S = sum_{l <= k} e L(m, l) l`.
///
/// `m_bound` bounds each interpolated function. When `e >= mu` no layer
/// fits and `k = 0`, `S = 0`.
pub fn upper_bound_general(mu: u64, m_bound: f64, delta: f64, m: u32, e: f64, norm_d: f64) -> Result<GeneralBound> {
    check_delta(delta)?;
    if m == 0 {
        return Err(Error::InvalidParameter("general bound needs m >= 1".into()));
    }
    let mut k = 0u32;
    let mut partial = e * monomial_count(m as u64, 0) as f64;
    loop {
        let next = partial + e * monomial_count(m as u64, k as u64 + 1) as f64;
        if next < mu as f64 {
            partial = next;
            k += 1;
        } else {
            break;
        }
    }
    let s: f64 = (0..=k).map(|l| e * monomial_count(m as u64, l as u64) as f64 * l as f64).sum();
    let c0 = norm_d * e * monomial_count(m as u64, k as u64) as f64 / (1.0 - delta).powi(m as i32) * m_bound;
    let mu_f = mu as f64;
    let ln_value = mu_f * mu_f.ln() + ln_factorial(mu) + mu_f * c0.ln() + s * delta.ln();
    Ok(GeneralBound {
        k,
        c0,
        s,
        ln_value,
        value: ln_value.exp(),
    })
}

/// `H^-((m+1) d mu)`, exactly.
pub fn lower_bound(h: u64, m: u32, d: u32, mu: u64) -> Rational {
    let e = (m as u64 + 1) * d as u64 * mu;
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(h), e as usize))
}

pub fn ln_lower_bound(h: u64, m: u32, d: u32, mu: u64) -> f64 {
    -((m as f64 + 1.0) * d as f64 * mu as f64) * (h as f64).ln()
}

/// Whether every polynomial interpolation determinant of degree `d` at
/// height-`<= h` points in a `delta`-polydisc must vanish: the general
/// upper bound, with the interpolated monomials bounded by `M^d`, falls
/// below the lower bound. For `m = 0` this is `d >= e`.
pub fn vanishing_forced(delta: f64, h: u64, m_bound: f64, d: u32, m: u32, e: f64, norm_d: f64) -> Result<bool> {
    if m == 0 {
        return Ok(d as f64 >= e);
    }
    let mu = mu_of(m as u64, d as u64) as u64;
    let g = upper_bound_general(mu, m_bound.max(1.0).powi(d as i32), delta, m, e, norm_d)?;
    Ok(g.ln_value < ln_lower_bound(h, m, d, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn curve_bound_examples() {
        let v = upper_bound_curve(1, 1.0, 1, 0.1).unwrap();
        assert!((v - 4.0 * 0.1f64.sqrt()).abs() < 1e-12);
        let v = upper_bound_curve(3, 1.0, 2, 0.25).unwrap();
        assert!((v - 6.0).abs() < 1e-9);
        let a = upper_bound_curve(4, 1.5, 2, 0.2).unwrap();
        let b = upper_bound_curve(4, 3.0, 2, 0.2).unwrap();
        assert!((b / a - 2f64.powi(8)).abs() < 1e-6);
        assert!(matches!(upper_bound_curve(3, 1.0, 2, 0.5), Err(Error::DeltaTooLarge { .. })));
    }

    #[test]
    fn general_bound_layers() {
        let g = upper_bound_general(3, 1.0, 0.1, 1, 1.0, 1.0).unwrap();
        assert_eq!((g.k, g.s), (1, 1.0));
        let g = upper_bound_general(6, 1.0, 0.1, 1, 1.0, 1.0).unwrap();
        // 1 + 1 + 1 + 1 + 1 = 5 < 6
        assert_eq!((g.k, g.s), (4, 10.0));
        let g = upper_bound_general(6, 1.0, 0.1, 2, 1.0, 1.0).unwrap();
        // 1 + 2 = 3 < 6, 1 + 2 + 3 = 6
        assert_eq!((g.k, g.s), (1, 2.0));
        let a = upper_bound_general(6, 2.0, 0.1, 2, 2.0, 1.5).unwrap();
        let b = upper_bound_general(6, 4.0, 0.1, 2, 2.0, 1.5).unwrap();
        assert!((b.c0 / a.c0 - 2.0).abs() < 1e-12);
        assert!(((b.ln_value - a.ln_value) - 6.0 * 2f64.ln()).abs() < 1e-9);
        let small = upper_bound_general(6, 2.0, 1e-12, 1, 1.0, 1.0).unwrap();
        assert!(small.value < 1e-100);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(1, 1, 1, 3), Rational::one());
        assert_eq!(lower_bound(4, 1, 1, 3), rat(1, 4096));
        assert!(rat(1, 4) >= lower_bound(4, 1, 1, 3));
        assert_eq!(lower_bound(3, 1, 2, 3), lower_bound(3, 1, 1, 3) * lower_bound(3, 1, 1, 3));
    }

    #[test]
    fn forced_vanishing() {
        assert!(vanishing_forced(0.3, 10, 2.0, 5, 0, 3.0, 1.0).unwrap());
        assert!(!vanishing_forced(0.3, 10, 2.0, 2, 0, 3.0, 1.0).unwrap());
        let e2 = std::f64::consts::E.powi(2);
        assert!(!vanishing_forced(0.49, 1_000_000, e2, 2, 1, 1.0, 1.0).unwrap());
        assert!(vanishing_forced(1e-40, 1_000_000, e2, 2, 1, 1.0, 1.0).unwrap());
    }
}
