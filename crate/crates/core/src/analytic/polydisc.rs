use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CONTAIN_SLACK: f64 = 1e-12;

/// Product of closed discs `|z_i - c_i| <= r_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polydisc {
    center: Vec<Complex64>,
    radii: Vec<f64>,
}

impl Polydisc {
    pub fn new(center: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        if center.len() != radii.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                got: radii.len(),
            });
        }
        if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidParameter(format!("polyradii must be positive: {radii:?}")));
        }
        Ok(Polydisc { center, radii })
    }

    pub fn real(center: &[f64], radii: &[f64]) -> Result<Self> {
        Self::new(center.iter().map(|&c| Complex64::new(c, 0.0)).collect(), radii.to_vec())
    }

    /// Unit polydisc at the origin.
    pub fn unit(n: usize) -> Self {
        Polydisc {
            center: vec![Complex64::new(0.0, 0.0); n],
            radii: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn contains_point(&self, z: &[Complex64]) -> bool {
        z.len() == self.dim()
            && z.iter()
                .zip(&self.center)
                .zip(&self.radii)
                .all(|((z, c), r)| (z - c).norm() <= r * (1.0 + CONTAIN_SLACK))
    }

    pub fn contains(&self, other: &Polydisc) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|i| {
                (other.center[i] - self.center[i]).norm() + other.radii[i] <= self.radii[i] * (1.0 + CONTAIN_SLACK)
            })
    }

    /// Coordinates `i` in `idx`, in that order.
    pub fn project(&self, idx: &[usize]) -> Polydisc {
        Polydisc {
            center: idx.iter().map(|&i| self.center[i]).collect(),
            radii: idx.iter().map(|&i| self.radii[i]).collect(),
        }
    }

    pub fn product(&self, other: &Polydisc) -> Polydisc {
        let mut center = self.center.clone();
        center.extend_from_slice(&other.center);
        let mut radii = self.radii.clone();
        radii.extend_from_slice(&other.radii);
        Polydisc { center, radii }
    }

    /// `p + delta^{-1} (A - p)`.
    pub fn rescale(&self, delta: f64, p: &[Complex64]) -> Result<Polydisc> {
        check_delta(delta)?;
        Ok(Polydisc {
            center: self.center.iter().zip(p).map(|(c, p)| p + (c - p) / delta).collect(),
            radii: self.radii.iter().map(|r| r / delta).collect(),
        })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("rescaling factor must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

/// Product of closed real intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealBox {
    intervals: Vec<(f64, f64)>,
}

impl RealBox {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidParameter("box needs at least one interval".into()));
        }
        if intervals.iter().any(|(lo, hi)| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::InvalidParameter(format!("empty interval in box {intervals:?}")));
        }
        Ok(RealBox { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn sides(&self) -> Vec<f64> {
        self.intervals.iter().map(|(lo, hi)| hi - lo).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.intervals).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn rescale(&self, delta: f64, p: &[f64]) -> Result<RealBox> {
        check_delta(delta)?;
        Ok(RealBox {
            intervals: self
                .intervals
                .iter()
                .zip(p)
                .map(|((lo, hi), p)| (p + (lo - p) / delta, p + (hi - p) / delta))
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescale_examples() {
        let d = Polydisc::unit(1);
        let z = [Complex64::new(0.0, 0.0)];
        assert_eq!(d.rescale(1.0, &z).unwrap(), d);
        assert_eq!(d.rescale(0.5, &z).unwrap().radii(), &[2.0]);
        let b = RealBox::new(vec![(0.0, 1.0)]).unwrap();
        assert_eq!(b.rescale(0.5, &[0.0]).unwrap().intervals(), &[(0.0, 2.0)]);
        assert!(d.rescale(0.0, &z).is_err());
    }

    #[test]
    fn containment() {
        let big = Polydisc::real(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let small = Polydisc::real(&[0.5, 0.0], &[0.5, 0.2]).unwrap();
        assert!(big.contains(&small));
        let out = Polydisc::real(&[0.6, 0.0], &[0.5, 0.2]).unwrap();
        assert!(!big.contains(&out));
        assert!(Polydisc::new(vec![Complex64::new(0.0, 0.0)], vec![0.0]).is_err());
    }
}
