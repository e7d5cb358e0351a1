//! Interpolation determinants, exact or enclosed.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::basis::MonomialBasis;
use super::linalg::det_rational;
use crate::analytic::FunctionHandle;
use crate::error::{Error, Result};
use crate::interval::{ceil_dyadic, floor_dyadic, up, upper_f64, RatInterval};
use crate::rational::{to_f64, Rational, RationalVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetSign {
    Positive,
    Negative,
    Zero,
    IndeterminateSign,
}

/// `value +- radius`. Exact determinants have radius zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DetEnclosure {
    pub value: Rational,
    pub radius: f64,
}

impl DetEnclosure {
    pub fn exact(value: Rational) -> Self {
        DetEnclosure { value, radius: 0.0 }
    }

    pub fn is_exact(&self) -> bool {
        self.radius == 0.0
    }

    pub fn sign(&self) -> DetSign {
        let v = to_f64(&self.value);
        if self.radius == 0.0 {
            if self.value.is_zero() {
                DetSign::Zero
            } else if self.value.is_positive() {
                DetSign::Positive
            } else {
                DetSign::Negative
            }
        } else if v.abs() > up(self.radius) * (1.0 + 1e-12) {
            if v > 0.0 {
                DetSign::Positive
            } else {
                DetSign::Negative
            }
        } else {
            DetSign::IndeterminateSign
        }
    }

    /// Upper bound for `|det|`.
    pub fn abs_upper(&self) -> f64 {
        let v = upper_f64(&self.value.abs());
        if self.radius == 0.0 {
            v
        } else {
            up(v + self.radius)
        }
    }
}

/// Determinant of an interval matrix. The midpoints, rounded to the grid
/// `2^-bits`, give an exact center; the radius is the Hadamard bound
/// `prod(|a_j| + |e_j|) - prod |a_j|` over columns, with `|e_j|` bounded by
/// `sqrt(n)` times the largest entry radius.
pub fn det_enclosure(a: &[Vec<RatInterval>], bits: u32) -> DetEnclosure {
    let n = a.len();
    if a.iter().all(|r| r.iter().all(|c| c.is_point())) {
        let m: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|c| c.lo().clone()).collect()).collect();
        return DetEnclosure::exact(det_rational(&m));
    }
    let mut eta = Rational::zero();
    let mid: Vec<Vec<Rational>> = a
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| {
                    let m = c.mid();
                    let rounded = if c.is_point() {
                        m
                    } else {
                        let lo = floor_dyadic(&m, bits);
                        if (&m - &lo) * crate::rational::int(2) <= ceil_dyadic(&m, bits) - &lo {
                            lo
                        } else {
                            ceil_dyadic(&m, bits)
                        }
                    };
                    let e = RatInterval::new(c.lo() - &rounded, c.hi() - &rounded).mag();
                    if e > eta {
                        eta = e;
                    }
                    rounded
                })
                .collect()
        })
        .collect();
    let value = det_rational(&mid);
    let col_err = up((n as f64).sqrt() * upper_f64(&eta));
    // |e_j| / |a_j| accumulates in log space.
    let mut log_ratio = 0.0;
    let mut prod_a = 1.0;
    let mut zero_col = false;
    for j in 0..n {
        let norm2: Rational = mid.iter().map(|r| &r[j] * &r[j]).sum();
        let norm = up(upper_f64(&norm2).sqrt());
        if norm == 0.0 {
            zero_col = true;
            prod_a = 1.0;
            break;
        }
        prod_a = up(prod_a * norm);
        log_ratio = up(log_ratio + up((col_err / norm).ln_1p()));
    }
    let radius = if zero_col {
        let mut p = 1.0;
        for j in 0..n {
            let norm2: Rational = mid.iter().map(|r| &r[j] * &r[j]).sum();
            p = up(p * up(up(upper_f64(&norm2).sqrt()) + col_err));
        }
        p
    } else {
        up(prod_a * up(log_ratio.exp_m1()))
    };
    DetEnclosure { value, radius }
}

/// `det(g_i(p_j))`.
pub fn interp_det(g: &[FunctionHandle], p: &[RationalVector], bits: u32) -> Result<DetEnclosure> {
    if g.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: g.len(),
            got: p.len(),
        });
    }
    let rows: Vec<Vec<RatInterval>> = p
        .iter()
        .map(|pt| g.iter().map(|gi| gi.enclose(pt.coords(), bits)).collect())
        .collect();
    Ok(det_enclosure(&rows, bits))
}

/// Row of monomials `v^alpha`, `|alpha| <= d`, in graded-lex order.
pub fn monomial_row(basis: &MonomialBasis, v: &[RatInterval]) -> Vec<RatInterval> {
    let d = basis.degree() as usize;
    let powers: Vec<Vec<RatInterval>> = v
        .iter()
        .map(|x| {
            let mut p = vec![RatInterval::one()];
            for _ in 0..d {
                let next = p.last().unwrap() * x;
                p.push(next);
            }
            p
        })
        .collect();
    basis
        .exponents()
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .fold(RatInterval::one(), |acc, (i, &k)| if k == 0 { acc } else { &acc * &powers[i][k as usize] })
        })
        .collect()
}

/// Exact monomial row at a rational point.
pub fn monomial_row_exact(basis: &MonomialBasis, v: &[Rational]) -> Vec<Rational> {
    let iv: Vec<RatInterval> = v.iter().map(|x| RatInterval::point(x.clone())).collect();
    monomial_row(basis, &iv).into_iter().map(|c| c.lo().clone()).collect()
}

/// Polynomial interpolation determinant of degree `d` for the map
/// `f = (f_1, .., f_{m+1})` at `mu(m, d)` points.
pub fn poly_interp_det(d: u32, f: &[FunctionHandle], p: &[RationalVector], bits: u32) -> Result<DetEnclosure> {
    let basis = MonomialBasis::new(f.len(), d)?;
    if p.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            got: p.len(),
        });
    }
    let rows: Vec<Vec<RatInterval>> = p
        .iter()
        .map(|pt| {
            let v: Vec<RatInterval> = f.iter().map(|fi| fi.enclose(pt.coords(), bits)).collect();
            monomial_row(&basis, &v)
        })
        .collect();
    Ok(det_enclosure(&rows, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::exp_enclosure;
    use crate::rational::{int, rat};

    fn pts(v: &[(Rational, Rational)]) -> Vec<RationalVector> {
        v.iter().map(|(a, b)| RationalVector::new(vec![a.clone(), b.clone()]).unwrap()).collect()
    }

    fn xy() -> Vec<FunctionHandle> {
        vec![FunctionHandle::coordinate(2, 0), FunctionHandle::coordinate(2, 1)]
    }

    #[test]
    fn small_examples() {
        let g = vec![FunctionHandle::parse("1", &["x"]).unwrap(), FunctionHandle::parse("x", &["x"]).unwrap()];
        let p = vec![RationalVector::new(vec![int(0)]).unwrap(), RationalVector::new(vec![int(1)]).unwrap()];
        assert_eq!(interp_det(&g, &p, 64).unwrap(), DetEnclosure::exact(int(1)));
        let p = vec![RationalVector::new(vec![rat(1, 3)]).unwrap(); 2];
        assert_eq!(interp_det(&g, &p, 64).unwrap().sign(), DetSign::Zero);
    }

    #[test]
    fn collinear_and_quarter() {
        let g: Vec<FunctionHandle> = ["1", "x", "y"].iter().map(|s| FunctionHandle::parse(s, &["x", "y"]).unwrap()).collect();
        let p = pts(&[(int(0), int(1)), (int(1), int(3)), (rat(1, 2), int(2))]);
        assert_eq!(interp_det(&g, &p, 64).unwrap().sign(), DetSign::Zero);

        let p = pts(&[(int(0), int(0)), (int(1), int(1)), (rat(1, 2), rat(1, 4))]);
        assert_eq!(poly_interp_det(1, &xy(), &p, 64).unwrap(), DetEnclosure::exact(rat(-1, 4)));
    }

    #[test]
    fn points_on_a_conic_vanish() {
        let p = pts(&[
            (int(1), int(0)),
            (int(0), int(1)),
            (int(-1), int(0)),
            (rat(3, 5), rat(4, 5)),
            (rat(-5, 13), rat(12, 13)),
            (rat(8, 17), rat(-15, 17)),
        ]);
        assert_eq!(poly_interp_det(2, &xy(), &p, 64).unwrap().sign(), DetSign::Zero);
    }

    #[test]
    fn enclosure_contains_true_value() {
        // det [[1, e^a], [1, e^b]] = e^b - e^a
        let g = vec![FunctionHandle::parse("1", &["t"]).unwrap(), FunctionHandle::parse("exp(t)", &["t"]).unwrap()];
        let (a, b) = (rat(1, 3), rat(2, 5));
        let p = vec![RationalVector::new(vec![a.clone()]).unwrap(), RationalVector::new(vec![b.clone()]).unwrap()];
        let d = interp_det(&g, &p, 128).unwrap();
        let truth = &exp_enclosure(&b, 300) - &exp_enclosure(&a, 300);
        let lo = &d.value - crate::rational::from_f64(d.radius);
        let hi = &d.value + crate::rational::from_f64(d.radius);
        assert!(&lo <= truth.lo() && truth.hi() <= &hi);
        assert!(d.radius < 1e-30);
        assert_eq!(d.sign(), DetSign::Positive);
    }
}
