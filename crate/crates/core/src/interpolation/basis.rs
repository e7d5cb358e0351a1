use serde::Serialize;

use crate::analytic::poly::Multi;
use crate::error::{Error, Result};

/// `binomial(n, k)` in `u128`; saturates on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of monomials of degree exactly `k` in `n` variables,
/// `binomial(n + k - 1, n - 1)`.
pub fn monomial_count(n: u64, k: u64) -> u128 {
    assert!(n >= 1, "L(n, k) needs n >= 1");
    binomial(n + k - 1, n - 1)
}

/// Dimension of the polynomials of degree `<= d` in `m + 1` variables.
pub fn mu(m: u64, d: u64) -> u128 {
    monomial_count(m + 2, d)
}

/// Exponents of all monomials of degree `<= d` in `nvars` variables, in
/// graded lexicographic order: by degree, then by descending exponent of
/// the first variable, and so on. For `(x, y)` and `d = 2` this is
/// `1, x, y, x^2, xy, y^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exponents: Vec<Multi>,
}

fn exponents_of_degree(nvars: usize, k: u32, out: &mut Vec<Multi>) {
    fn rec(prefix: &mut Multi, left: usize, k: u32, out: &mut Vec<Multi>) {
        if left == 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(prefix, left - 1, k - first, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), nvars, k, out);
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidParameter("basis needs at least one variable".into()));
        }
        let mut exponents = Vec::new();
        for k in 0..=degree {
            exponents_of_degree(nvars, k, &mut exponents);
        }
        Ok(MonomialBasis {
            nvars,
            degree,
            exponents,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[Multi] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(2, 3), 4);
        assert_eq!(monomial_count(3, 2), 6);
        for k in 0..20 {
            assert_eq!(monomial_count(1, k), 1);
        }
        assert_eq!(mu(1, 2), 6);
        assert_eq!(mu(0, 5), 6);
        assert_eq!(mu(2, 1), 4);
    }

    #[test]
    fn basis_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        let want: Vec<Multi> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(b.exponents(), &want[..]);
        for m in 0..3u64 {
            for d in 1..5u64 {
                assert_eq!(MonomialBasis::new(m as usize + 1, d as u32).unwrap().len() as u128, mu(m, d));
            }
        }
    }
}
