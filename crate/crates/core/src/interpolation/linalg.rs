//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn det_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Scales each row to integers; returns the integer rows and the product of
/// the scale factors.
fn clear_rows(a: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = a
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &l;
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect();
    (rows, scale)
}

pub fn det_rational(a: &[Vec<Rational>]) -> Rational {
    let (rows, scale) = clear_rows(a);
    Rational::new(det_integer(rows), scale)
}

/// Rank by fraction-free elimination on the cleared integer matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let (mut m, _) = clear_rows(a);
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Reduced row echelon form built one row at a time. Columns are pivoted
/// in their natural order.
#[derive(Debug, Clone)]
pub struct IncrementalRref {
    cols: usize,
    /// `(pivot column, row)` with the pivot entry 1 and zeros in the other
    /// pivot columns.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl IncrementalRref {
    pub fn new(cols: usize) -> Self {
        IncrementalRref { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rows.len()
    }

    fn reduce(&self, row: &[Rational]) -> Vec<Rational> {
        let mut v = row.to_vec();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Whether adding `row` would raise the rank.
    pub fn is_independent(&self, row: &[Rational]) -> bool {
        self.reduce(row).iter().any(|x| !x.is_zero())
    }

    /// Adds a row; returns whether the rank grew.
    pub fn push(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut v = self.reduce(row);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    /// Kernel vector attached to the first free column, if any.
    pub fn first_kernel_vector(&self) -> Option<Vec<Rational>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let mut v = vec![Rational::zero(); self.cols];
        v[free] = Rational::one();
        for (p, r) in &self.rows {
            v[*p] = -r[free].clone();
        }
        Some(v)
    }
}

/// Scales a nonzero rational vector to coprime integers with a positive
/// first nonzero entry.
pub fn normalize_integer(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let neg = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| {
            let y = x / &g;
            if neg {
                -y
            } else {
                y
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn naive_det(a: &[Vec<Rational>]) -> Rational {
        let n = a.len();
        if n == 0 {
            return int(1);
        }
        let mut s = Rational::zero();
        for j in 0..n {
            let minor: Vec<Vec<Rational>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &a[0][j] * naive_det(&minor);
            if j % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    }

    #[test]
    fn determinants_agree_with_cofactor_expansion() {
        let a = vec![
            vec![rat(1, 2), rat(-3, 4), int(2), int(0)],
            vec![int(0), int(0), rat(5, 3), int(1)],
            vec![rat(7, 5), int(1), int(0), rat(-1, 6)],
            vec![int(3), rat(2, 7), int(1), int(1)],
        ];
        assert_eq!(det_rational(&a), naive_det(&a));
        assert_eq!(rank(&a), 4);
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(1), int(0), int(1)],
        ];
        assert_eq!(rank(&a), 2);
        assert_eq!(det_rational(&a), int(0));
        let mut r = IncrementalRref::new(3);
        for row in &a {
            r.push(row);
        }
        assert_eq!(r.rank(), 2);
        let v = r.first_kernel_vector().unwrap();
        for row in &a {
            let s: Rational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        assert_eq!(normalize_integer(&v), vec![BigInt::from(1), BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn normalization() {
        let v = vec![int(0), rat(-1, 2), rat(3, 4)];
        assert_eq!(normalize_integer(&v), vec![BigInt::from(0), BigInt::from(2), BigInt::from(-3)]);
    }
}
