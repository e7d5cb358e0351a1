use serde::{Deserialize, Serialize};

use crate::analytic::poly::{total_degree, Multi};
use crate::error::{Error, Result};
use crate::interpolation::basis::{binomial, monomial_count};

/// Default number of degrees probed by [`e_constant`].
pub const DEFAULT_K_PROBE: u32 = 50;

/// A monomial co-ideal, stored as the minimal generators of the
/// complementary monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoIdeal {
    n: usize,
    generators: Vec<Multi>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl CoIdeal {
    pub fn new(n: usize, generators: Vec<Multi>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("co-ideal needs n >= 1".into()));
        }
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: g.len(),
                });
            }
        }
        let mut minimal: Vec<Multi> = Vec::new();
        for g in &generators {
            let redundant = generators
                .iter()
                .any(|h| h != g && divides(h, g))
                || minimal.contains(g);
            if !redundant {
                minimal.push(g.clone());
            }
        }
        minimal.sort();
        Ok(CoIdeal {
            n,
            generators: minimal,
        })
    }

    /// All of `N^n`.
    pub fn full(n: usize) -> Result<Self> {
        CoIdeal::new(n, Vec::new())
    }

    /// `N^(n-1) x {0, .., d-1}`: the staircase left by division by a
    /// Weierstrass polynomial of degree `d` in the last variable.
    pub fn weierstrass(n: usize, d: u32) -> Result<Self> {
        let mut g = vec![0; n];
        g[n - 1] = d;
        CoIdeal::new(n, vec![g])
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Multi] {
        &self.generators
    }

    pub fn contains(&self, alpha: &[u32]) -> Result<bool> {
        if alpha.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        Ok(!self.generators.iter().any(|g| divides(g, alpha)))
    }

    /// Elements of degree `<= k`.
    pub fn elements_up_to(&self, k: u32) -> Vec<Multi> {
        let basis = crate::interpolation::basis::MonomialBasis::new(self.n, k)
            .expect("n >= 1");
        basis
            .exponents()
            .iter()
            .filter(|a| !self.generators.iter().any(|g| divides(g, a)))
            .cloned()
            .collect()
    }

    fn is_finite(&self) -> bool {
        (0..self.n).all(|i| self.generators.iter().any(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0)))
    }
}

pub fn coideal_contains(m: &CoIdeal, alpha: &[u32]) -> Result<bool> {
    m.contains(alpha)
}

/// `#{alpha in M : |alpha| <= k}` by inclusion-exclusion over the
/// generators.
pub fn hilbert_samuel(m: &CoIdeal, k: u32) -> u128 {
    let n = m.n as u64;
    let gens = &m.generators;
    if gens.len() > 20 {
        return m.elements_up_to(k).len() as u128;
    }
    let mut pos: u128 = 0;
    let mut neg: u128 = 0;
    for mask in 0u32..(1u32 << gens.len()) {
        let mut lcm = vec![0u32; m.n];
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (l, &e) in lcm.iter_mut().zip(g) {
                    *l = (*l).max(e);
                }
            }
        }
        let deg = total_degree(&lcm);
        if deg > k {
            continue;
        }
        let c = binomial(n + (k - deg) as u64, n);
        if mask.count_ones() % 2 == 0 {
            pos += c;
        } else {
            neg += c;
        }
    }
    pos - neg
}

/// Largest `|S|` such that `N^S` (translated) lies in `M`, i.e. no
/// generator is supported inside `S`.
pub fn coideal_dim(m: &CoIdeal) -> usize {
    let n = m.n;
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let blocked = m.generators.iter().any(|g| {
            g.iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || mask >> i & 1 == 1)
        });
        if !blocked {
            best = size;
        }
    }
    best
}

/// Smallest `e` with `H(k) - H(k-1) <= e * L(dim M, k)` for
/// `0 <= k <= k_probe`; the size of `M` when it is finite.
pub fn e_constant(m: &CoIdeal, k_probe: u32) -> f64 {
    e_constant_witness(m, k_probe).0
}

/// [`e_constant`] together with a degree attaining it.
pub fn e_constant_witness(m: &CoIdeal, k_probe: u32) -> (f64, u32) {
    let dim = coideal_dim(m);
    if dim == 0 {
        debug_assert!(m.is_finite());
        let top: u32 = m.generators.iter().map(|g| total_degree(g)).sum();
        return (hilbert_samuel(m, top) as f64, top);
    }
    let mut best = (0.0, 0);
    let mut prev = 0u128;
    for k in 0..=k_probe {
        let h = hilbert_samuel(m, k);
        let ratio = (h - prev) as f64 / monomial_count(dim as u64, k as u64) as f64;
        if ratio > best.0 {
            best = (ratio, k);
        }
        prev = h;
    }
    best
}
