use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use super::basis::MonomialBasis;
use super::det::monomial_row_exact;
use super::linalg::{normalize_integer, IncrementalRref};
use crate::analytic::{Poly, PolyDisplay};
use crate::error::{Error, Result};
use crate::rational::{Rational, RationalVector};

/// A nonzero polynomial of degree `<= d` in `m + 1` variables, stored as
/// coprime integer coefficients over the graded-lex monomial basis with a
/// positive first nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypersurface {
    m: usize,
    d: u32,
    coefficients: Vec<BigInt>,
}

impl Hypersurface {
    /// Normalizes a nonzero rational coefficient vector.
    pub fn from_vector(m: usize, d: u32, v: &[Rational]) -> Result<Self> {
        let basis = MonomialBasis::new(m + 1, d)?;
        if v.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: v.len(),
            });
        }
        if v.iter().all(|x| x.is_zero()) {
            return Err(Error::InvalidParameter("zero polynomial".into()));
        }
        Ok(Hypersurface {
            m,
            d,
            coefficients: normalize_integer(v),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> u32 {
        self.d
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.m + 1, self.d).expect("valid basis")
    }

    pub fn to_poly(&self) -> Poly {
        let basis = self.basis();
        Poly::from_terms(
            self.m + 1,
            basis
                .exponents()
                .iter()
                .zip(&self.coefficients)
                .map(|(e, c)| (e.clone(), Rational::from_integer(c.clone()))),
        )
    }

    pub fn eval(&self, p: &[Rational]) -> Rational {
        let row = monomial_row_exact(&self.basis(), p);
        row.iter()
            .zip(&self.coefficients)
            .map(|(x, c)| x * Rational::from_integer(c.clone()))
            .sum()
    }

    pub fn contains(&self, p: &RationalVector) -> bool {
        self.eval(p.coords()).is_zero()
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let owned: Vec<String> = (0..=self.m)
            .map(|i| NAMES.get(i).map_or(format!("x{i}"), |s| s.to_string()))
            .collect();
        let names: Vec<&str> = owned.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", PolyDisplay { poly: &self.to_poly(), names: &names })
    }
}

struct IntList<'a>(&'a [BigInt]);

impl Serialize for IntList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl Serialize for Hypersurface {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Hypersurface", 4)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("coefficients", &IntList(&self.coefficients))?;
        st.serialize_field("equation", &self.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Hypersurface(Hypersurface),
    /// The evaluation matrix has full column rank.
    Independent,
}

/// Exact rows of monomials at the points.
fn rows(points: &[RationalVector], d: u32) -> Result<(MonomialBasis, Vec<Vec<Rational>>)> {
    let n = points.first().map_or(0, |p| p.len());
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidParameter("points of different dimensions".into()));
    }
    let basis = MonomialBasis::new(n, d)?;
    let r = points.iter().map(|p| monomial_row_exact(&basis, p.coords())).collect();
    Ok((basis, r))
}

/// A polynomial of degree `<= d` through all points: the kernel vector of
/// the evaluation matrix at its first free graded-lex column, normalized.
pub fn select_hypersurface(points: &[RationalVector], d: u32) -> Result<Selection> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points".into()));
    }
    let (basis, rows) = rows(points, d)?;
    let mut rref = IncrementalRref::new(basis.len());
    for r in &rows {
        rref.push(r);
        if rref.nullity() == 0 {
            return Ok(Selection::Independent);
        }
    }
    let v = rref.first_kernel_vector().expect("nonzero nullity");
    Ok(Selection::Hypersurface(Hypersurface::from_vector(points[0].len() - 1, d, &v)?))
}

/// Like [`select_hypersurface`], but after the required points the
/// `extra` points are added in order whenever they keep the kernel
/// nontrivial. This pins the hypersurface down using nearby points when
/// the required ones alone leave it underdetermined. Returns the selection
/// and the number of extra points absorbed.
pub fn select_hypersurface_extended(points: &[RationalVector], extra: &[RationalVector], d: u32) -> Result<(Selection, usize)> {
    if points.is_empty() {
        return Err(Error::InvalidParameter("no points".into()));
    }
    let (basis, req) = rows(points, d)?;
    let mut rref = IncrementalRref::new(basis.len());
    for r in &req {
        rref.push(r);
    }
    if rref.nullity() == 0 {
        return Ok((Selection::Independent, 0));
    }
    let mut absorbed = 0;
    for p in extra {
        if rref.nullity() == 1 {
            break;
        }
        if p.len() != points[0].len() {
            return Err(Error::InvalidParameter("points of different dimensions".into()));
        }
        let r = monomial_row_exact(&basis, p.coords());
        if !rref.is_independent(&r) {
            absorbed += 1;
            continue;
        }
        if rref.nullity() > 1 {
            rref.push(&r);
            absorbed += 1;
        }
    }
    let v = rref.first_kernel_vector().expect("nonzero nullity");
    let h = Hypersurface::from_vector(points[0].len() - 1, d, &v)?;
    Ok((Selection::Hypersurface(h), absorbed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pt(a: Rational, b: Rational) -> RationalVector {
        RationalVector::new(vec![a, b]).unwrap()
    }

    fn circle_points() -> Vec<RationalVector> {
        // (1 - t^2, 2t) / (1 + t^2)
        [rat(0, 1), rat(1, 2), rat(1, 3), rat(2, 3), rat(1, 4), rat(3, 4), rat(-1, 2), rat(-1, 3), rat(2, 5), rat(-2, 5), rat(1, 5), rat(-3, 4)]
            .iter()
            .map(|t| {
                let den = int(1) + t * t;
                pt((int(1) - t * t) / &den, (t * int(2)) / den)
            })
            .collect()
    }

    #[test]
    fn unit_circle() {
        let sel = select_hypersurface(&circle_points(), 2).unwrap();
        let Selection::Hypersurface(h) = sel else { panic!("expected a conic") };
        let want: Vec<BigInt> = [1, 0, 0, -1, 0, -1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(h.coefficients(), &want[..]);
        assert_eq!(h.to_string(), "-x^2 - y^2 + 1");
        assert!(circle_points().iter().all(|p| h.contains(p)));
    }

    #[test]
    fn generic_points_independent() {
        let p = vec![
            pt(rat(1, 7), rat(2, 9)),
            pt(rat(-3, 5), rat(1, 11)),
            pt(rat(4, 13), rat(-6, 7)),
            pt(rat(2, 3), rat(5, 8)),
            pt(rat(-1, 9), rat(-2, 5)),
            pt(rat(7, 10), rat(3, 17)),
        ];
        assert_eq!(select_hypersurface(&p, 2).unwrap(), Selection::Independent);
    }

    #[test]
    fn single_point_line() {
        let p = vec![pt(rat(1, 3), rat(-2, 7))];
        let Selection::Hypersurface(h) = select_hypersurface(&p, 1).unwrap() else { panic!() };
        assert!(h.contains(&p[0]));
    }

    #[test]
    fn extension_pins_down_the_conic() {
        let all = circle_points();
        let (sel, _) = select_hypersurface_extended(&all[..2], &all[2..], 2).unwrap();
        let Selection::Hypersurface(h) = sel else { panic!() };
        assert!(all.iter().all(|p| h.contains(p)));
        assert_eq!(h.coefficients()[0], BigInt::from(1));
    }

    #[test]
    fn serializes_integers() {
        let p = vec![pt(int(0), int(1)), pt(int(1), int(0))];
        let Selection::Hypersurface(h) = select_hypersurface(&p, 1).unwrap() else { panic!() };
        let j = serde_json::to_value(&h).unwrap();
        assert_eq!(j["m"], 1);
        assert_eq!(j["coefficients"], serde_json::json!([1, -1, -1]));
    }
}
