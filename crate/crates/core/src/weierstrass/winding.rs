use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{Polydisc, TaylorModel};
use crate::error::{Error, Result};

pub const DEFAULT_QUADRATURE: usize = 256;
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 16;
/// Accepted distance of a winding integral from an integer.
pub const INTEGER_WINDOW: f64 = 0.1;
/// Relative size of `|f|` on a contour treated as a zero.
pub const NEAR_ZERO: f64 = 1e-9;

/// Root count of a certified Weierstrass polydisc and the raw winding
/// integrals it was read from (center first, then boundary samples).
#[derive(Debug, Clone, Serialize)]
pub struct WindingCertificate {
    pub degree: u32,
    pub integrals: Vec<f64>,
    pub n_boundary: usize,
    pub n_quadrature: usize,
}

/// Base points: the center of `base`, then `count` points of its
/// distinguished boundary (torus), spread by a per-coordinate phase.
pub fn base_samples(base: &Polydisc, count: usize) -> Vec<Vec<Complex64>> {
    let mut out = vec![base.center().to_vec()];
    if base.dim() == 0 {
        return out;
    }
    let golden = 0.618_033_988_749_894_9;
    for s in 0..count {
        let z = base
            .center()
            .iter()
            .zip(base.radii())
            .enumerate()
            .map(|(i, (c, r))| {
                let t = 2.0 * PI * ((s as f64 + 0.5) / count as f64 + golden * i as f64);
                c + Complex64::from_polar(*r, t)
            })
            .collect();
        out.push(z);
    }
    out
}

fn winding_at(f: &TaylorModel, df: &TaylorModel, z: &[Complex64], wc: Complex64, rv: f64, nq: usize) -> std::result::Result<f64, f64> {
    let mut point = z.to_vec();
    point.push(wc);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut min_abs = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    for j in 0..nq {
        let u = Complex64::from_polar(rv, 2.0 * PI * j as f64 / nq as f64);
        point[z.len()] = wc + u;
        let fv = f.evaluate(&point).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let dv = df.evaluate(&point).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0));
        min_abs = min_abs.min(fv.norm());
        max_abs = max_abs.max(fv.norm());
        sum += dv / fv * u;
    }
    if !(min_abs > NEAR_ZERO * max_abs) {
        return Err(min_abs);
    }
    Ok(sum.re / nq as f64)
}

/// Counts the roots of `f(z, .)` in `vertical` by the argument principle,
/// for `z` at the center and at `n_boundary` points of the boundary of
/// `base`. Succeeds when every count is within [`INTEGER_WINDOW`] of the
/// same integer.
pub fn certify_weierstrass_polydisc(
    f: &TaylorModel,
    base: &Polydisc,
    vertical: &Polydisc,
    n_boundary: usize,
    n_quadrature: usize,
) -> Result<WindingCertificate> {
    let n = f.nvars();
    if base.dim() + 1 != n || vertical.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: base.dim() + vertical.dim(),
        });
    }
    if n_quadrature < 8 {
        return Err(Error::InvalidParameter("need at least 8 quadrature nodes".into()));
    }
    if !f.domain().contains(&base.product(vertical)) {
        return Err(Error::NotContained);
    }
    let df = f.derivative(n - 1);
    let samples = base_samples(base, n_boundary);
    let wc = vertical.center()[0];
    let rv = vertical.radii()[0];
    let raw: Vec<std::result::Result<f64, f64>> = samples
        .par_iter()
        .map(|z| winding_at(f, &df, z, wc, rv, n_quadrature))
        .collect();
    let mut integrals = Vec::with_capacity(raw.len());
    for (i, r) in raw.into_iter().enumerate() {
        match r {
            Ok(v) => integrals.push(v),
            Err(value) => return Err(Error::NearZeroOnBoundary { sample: i, value }),
        }
    }
    let d = integrals[0].round();
    let consistent = d >= 0.0 && integrals.iter().all(|v| (v - d).abs() <= INTEGER_WINDOW);
    if !consistent {
        return Err(Error::InconsistentCounts { values: integrals });
    }
    Ok(WindingCertificate {
        degree: d as u32,
        integrals,
        n_boundary,
        n_quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::FunctionHandle;
    use crate::rational::int;

    fn model(src: &str) -> TaylorModel {
        let h = FunctionHandle::parse(src, &["z", "w"]).unwrap();
        h.build_model(&[int(0), int(0)], 16, &Polydisc::real(&[0.0, 0.0], &[2.0, 2.0]).unwrap()).unwrap()
    }

    fn disc(r: f64) -> Polydisc {
        Polydisc::real(&[0.0], &[r]).unwrap()
    }

    #[test]
    fn hyperbola_two_roots() {
        let c = certify_weierstrass_polydisc(&model("w^2 - z^2 + 1/2"), &disc(0.3), &disc(1.0), 16, 256).unwrap();
        assert_eq!(c.degree, 2);
        assert!(c.integrals.iter().all(|v| (v - 2.0).abs() < 1e-9));
    }

    #[test]
    fn linear_and_trivial() {
        let c = certify_weierstrass_polydisc(&model("w - z"), &disc(0.5), &disc(1.0), 16, 256).unwrap();
        assert_eq!(c.degree, 1);
        for r in [0.1, 0.9, 1.5] {
            let c = certify_weierstrass_polydisc(&model("w"), &disc(r), &disc(1.0), 8, 256).unwrap();
            assert_eq!(c.degree, 1);
        }
    }

    #[test]
    fn root_crossing_contour() {
        // w = z leaves the unit disc for |z| = 1.5
        let e = certify_weierstrass_polydisc(&model("w - z"), &disc(1.5), &disc(1.0), 16, 256).unwrap_err();
        assert!(matches!(e, Error::InconsistentCounts { .. } | Error::NearZeroOnBoundary { .. }));
        let e = certify_weierstrass_polydisc(&model("w - z"), &disc(1.0), &disc(1.0), 16, 256).unwrap_err();
        assert!(matches!(e, Error::NearZeroOnBoundary { .. }));
    }

    #[test]
    fn univariate() {
        let h = FunctionHandle::parse("w^3 - 1/8", &["w"]).unwrap();
        let f = h.build_model(&[int(0)], 8, &Polydisc::unit(1)).unwrap();
        let empty = Polydisc::new(vec![], vec![]).unwrap();
        let c = certify_weierstrass_polydisc(&f, &empty, &disc(1.0), 16, 256).unwrap();
        assert_eq!(c.degree, 3);
        assert_eq!(c.integrals.len(), 1);
    }
}
