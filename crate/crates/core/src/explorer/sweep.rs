//! Sweeps over heights and over parameter families.

use serde::Serialize;

use super::cover::{cover, CoverOptions, CoveringReport};
use super::descent::{dimension_descent, DescentReport, DEFAULT_TOL};
use super::scenario::{Scenario, ScenarioKind};
use crate::analytic::Polydisc;
use crate::error::{Error, Result};
use crate::rational::{HeightBound, Rational};
use crate::weierstrass::{
    monomial_probes, verify_norm_constant, weierstrass_division, DecompositionDatum, Presentation, WeierstrassPolynomial,
};

/// Bound on the family norm constant regarded as uniform.
pub const UNIFORMITY_BOUND: f64 = 4.0;
const FAMILY_ORDER: u32 = 16;
const FAMILY_PROBE_DEGREE: u32 = 6;

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonRow {
    pub height: u64,
    pub transcendental: usize,
    pub h_eps: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsilonTable {
    pub scenario: String,
    pub eps: f64,
    pub degree: u32,
    pub rows: Vec<EpsilonRow>,
    /// Smallest `N` with `count <= N * H^eps` on every row.
    pub n_empirical: f64,
}

/// Tabulates transcendental counts against `H^eps` for runs of one
/// scenario at increasing heights.
pub fn verify_epsilon_bound(runs: &[(CoveringReport, DescentReport)]) -> Result<EpsilonTable> {
    let Some((first, _)) = runs.first() else {
        return Err(Error::InvalidParameter("no runs to tabulate".into()));
    };
    for (r, _) in runs {
        if r.scenario != first.scenario || r.eps != first.eps || r.degree != first.degree {
            return Err(Error::InvalidParameter("runs differ in scenario, eps or degree".into()));
        }
    }
    let rows: Vec<EpsilonRow> = runs
        .iter()
        .map(|(r, d)| {
            let h_eps = (r.height as f64).powf(r.eps);
            EpsilonRow {
                height: r.height,
                transcendental: d.transcendental,
                h_eps,
                ratio: d.transcendental as f64 / h_eps,
            }
        })
        .collect();
    let n_empirical = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(EpsilonTable {
        scenario: first.scenario.clone(),
        eps: first.eps,
        degree: first.degree,
        rows,
        n_empirical,
    })
}

/// Runs [`cover`] and [`dimension_descent`] at each height.
pub fn height_sweep(s: &Scenario, heights: &[u64], eps: f64, d: u32, opts: &CoverOptions) -> Result<EpsilonTable> {
    let mut runs = Vec::new();
    for &h in heights {
        let r = cover(s, HeightBound::new(h)?, eps, d, opts)?;
        let dsc = dimension_descent(s, &r, DEFAULT_TOL)?;
        runs.push((r, dsc));
    }
    verify_epsilon_bound(&runs)
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    pub scenario: String,
    pub parameter: Option<String>,
    pub hypersurfaces: usize,
    pub points: usize,
    pub transcendental: usize,
    /// Certified `|D|` over the unit bidisc.
    pub norm_constant: f64,
    /// Largest raw division ratio over the same probes.
    pub division_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilySweep {
    pub height: u64,
    pub eps: f64,
    pub degree: u32,
    pub members: Vec<FamilyMember>,
    pub max_hypersurfaces: usize,
    pub max_norm_constant: f64,
    pub uniform: bool,
}

/// `|D|` and the raw division ratio for an algebraic member presented
/// over the unit bidisc.
pub fn unit_bidisc_norms(s: &Scenario) -> Result<(f64, f64)> {
    let ScenarioKind::Algebraic(p) = &s.kind else {
        return Err(Error::UnsupportedPresentation("family members must be algebraic".into()));
    };
    let n = s.ambient_dim();
    let zero = vec![Rational::from_integer(0.into()); n];
    let f = WeierstrassPolynomial::from_poly(p, zero[..n - 1].to_vec(), FAMILY_ORDER, Polydisc::unit(n - 1))?;
    let pres = Presentation::Weierstrass(f.clone());
    let unit = Polydisc::unit(n);
    let datum = DecompositionDatum::new(unit.clone(), unit.clone(), pres.coideal(n)?, 1.0)?;
    let probes = monomial_probes(&zero, FAMILY_ORDER, &unit, FAMILY_PROBE_DEGREE)?;
    let norm = verify_norm_constant(&datum, &pres, &probes)?;
    let mut ratio: f64 = 0.0;
    for g in &probes {
        ratio = ratio.max(weierstrass_division(&f, g, FAMILY_ORDER)?.norm_ratio);
    }
    Ok((norm, ratio))
}

/// Covers each member of a family at one height and checks that the
/// hypersurface count and the norm constant stay bounded.
pub fn family_sweep(members: &[&Scenario], h: HeightBound, eps: f64, d: u32, opts: &CoverOptions) -> Result<FamilySweep> {
    let mut runs = Vec::new();
    for s in members {
        let r = cover(s, h, eps, d, opts)?;
        let dsc = dimension_descent(s, &r, DEFAULT_TOL)?;
        runs.push((*s, r, dsc));
    }
    family_summary(&runs)
}

/// Uniformity summary of already covered family members.
pub fn family_summary(runs: &[(&Scenario, CoveringReport, DescentReport)]) -> Result<FamilySweep> {
    let Some((_, first, _)) = runs.first() else {
        return Err(Error::InvalidParameter("empty family".into()));
    };
    let mut out = Vec::new();
    for (s, r, dsc) in runs {
        let (norm_constant, division_ratio) = unit_bidisc_norms(s)?;
        out.push(FamilyMember {
            scenario: s.name.clone(),
            parameter: s.parameter.as_ref().map(|q| q.to_string()),
            hypersurfaces: r.hypersurfaces.len(),
            points: r.points.len(),
            transcendental: dsc.transcendental,
            norm_constant,
            division_ratio,
        });
    }
    let max_hypersurfaces = out.iter().map(|m| m.hypersurfaces).max().unwrap_or(0);
    let max_norm_constant = out.iter().map(|m| m.norm_constant).fold(0.0, f64::max);
    Ok(FamilySweep {
        height: first.height,
        eps: first.eps,
        degree: first.degree,
        members: out,
        max_hypersurfaces,
        max_norm_constant,
        uniform: max_hypersurfaces <= 1 && max_norm_constant <= UNIFORMITY_BOUND,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorer::scenario::{resolve, ScenarioRef};

    #[test]
    fn hyperbola_family_uniform() {
        let fam = resolve("hyperbola_family", None).unwrap();
        let sw = family_sweep(&fam.members(), HeightBound::new(12).unwrap(), 1.0, 2, &CoverOptions::default()).unwrap();
        assert_eq!(sw.members.len(), 4);
        assert!(sw.uniform, "{sw:?}");
        let first = &sw.members[0];
        assert_eq!(first.norm_constant, 3.0);
        assert_eq!(first.division_ratio, 8.0);
    }

    #[test]
    fn epsilon_table_circle() {
        let ScenarioRef::Single(s) = resolve("circle", None).unwrap() else { panic!() };
        let t = height_sweep(&s, &[5, 10], 0.5, 2, &CoverOptions::default()).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(|r| r.transcendental == 0));
        assert_eq!(t.n_empirical, 0.0);
    }

    #[test]
    fn epsilon_table_exp() {
        let ScenarioRef::Single(s) = resolve("exp_graph", None).unwrap() else { panic!() };
        let t = height_sweep(&s, &[4, 16], 0.5, 2, &CoverOptions::default()).unwrap();
        assert_eq!(t.rows[0].ratio, 0.5);
        assert_eq!(t.rows[1].ratio, 0.25);
        assert_eq!(t.n_empirical, 0.5);
    }
}
