use num_traits::Zero;
use serde::Serialize;

use crate::analytic::{FunctionHandle, Poly, PolyDisplay, Polydisc, RealBox};
use crate::error::{Error, Result};
use crate::rational::{from_f64, parse_rational, rat, to_f64, Rational};
use crate::weierstrass::datum::{monomial_probes, verify_norm_constant};
use crate::weierstrass::{DecompositionDatum, Presentation, WeierstrassPolynomial};

/// Order of the models used for certificates.
const CERT_ORDER: u32 = 16;
/// Degree of the monomial probes behind a norm certificate.
const CERT_PROBE_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    /// `x_n = f(x_1, .., x_{n-1})`.
    Graph(FunctionHandle),
    /// `P(x) = 0`.
    Algebraic(Poly),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub bbox: RealBox,
    /// Family parameter of the member, if any.
    pub parameter: Option<Rational>,
}

/// Parameters fed to the forced-vanishing test for a scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Certificates {
    pub m: u32,
    /// Bound for the coordinate functions near the box.
    pub m_bound: f64,
    /// Empirical lower bound for the decomposition norm constant.
    pub norm_constant: f64,
    pub e_constant: f64,
}

pub const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

pub fn var_names(n: usize) -> &'static [&'static str] {
    &VAR_NAMES[..n]
}

fn poly(src: &str, n: usize) -> Poly {
    FunctionHandle::parse(src, var_names(n))
        .ok()
        .and_then(|h| h.as_polynomial().cloned())
        .expect("built-in polynomial")
}

pub const DEFAULT_FAMILY: [(i64, i64); 4] = [(1, 1), (1, 10), (1, 100), (0, 1)];

impl Scenario {
    pub fn algebraic(name: &str, p: Poly, bbox: RealBox) -> Result<Self> {
        if p.nvars() != bbox.dim() || !(2..=3).contains(&p.nvars()) {
            return Err(Error::InvalidParameter("algebraic scenarios live in 2 or 3 variables matching the box".into()));
        }
        if p.degree_in(p.nvars() - 1) == 0 {
            return Err(Error::UnsupportedPresentation("equation does not involve the last variable".into()));
        }
        Ok(Scenario {
            name: name.into(),
            kind: ScenarioKind::Algebraic(p),
            bbox,
            parameter: None,
        })
    }

    pub fn graph(name: &str, f: FunctionHandle, bbox: RealBox) -> Result<Self> {
        if !(2..=3).contains(&bbox.dim()) {
            return Err(Error::InvalidParameter("graph scenarios live in 2 or 3 variables".into()));
        }
        Ok(Scenario {
            name: name.into(),
            kind: ScenarioKind::Graph(f),
            bbox,
            parameter: None,
        })
    }

    /// Member `x^2 - y^2 = eps` of the hyperbola family on `[-1, 1]^2`.
    pub fn hyperbola(eps: Rational) -> Self {
        let p = &poly("x^2 - y^2", 2) - &Poly::constant(2, eps.clone());
        let mut s = Scenario::algebraic(&format!("hyperbola[eps={eps}]"), p, square()).expect("valid");
        s.parameter = Some(eps);
        s
    }

    /// Ambient dimension `m + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.bbox.dim()
    }

    pub fn m(&self) -> u32 {
        self.ambient_dim() as u32 - 1
    }

    pub fn description(&self) -> String {
        let names = var_names(self.ambient_dim());
        match &self.kind {
            ScenarioKind::Graph(f) => format!("{} = {}", names[names.len() - 1], f.display(&names[..names.len() - 1])),
            ScenarioKind::Algebraic(p) => format!("{} = 0", PolyDisplay { poly: p, names }),
        }
    }

    /// Defining function evaluated in floating point; zero on the set.
    pub fn defining_value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        match &self.kind {
            ScenarioKind::Graph(f) => x[n - 1] - f.eval_f64(&x[..n - 1]),
            ScenarioKind::Algebraic(p) => p.eval_f64(x),
        }
    }

    fn base_center(&self) -> Vec<Rational> {
        let iv = self.bbox.intervals();
        iv[..iv.len() - 1].iter().map(|(a, b)| from_f64((a + b) / 2.0)).collect()
    }

    /// Presentation over the base polydisc of radius 1 at the origin, used
    /// for the norm certificate.
    pub fn presentation(&self) -> Result<Presentation> {
        let n = self.ambient_dim();
        let base = Polydisc::unit(n - 1);
        let zero = vec![Rational::zero(); n - 1];
        match &self.kind {
            ScenarioKind::Graph(f) => Ok(Presentation::Graph(f.build_model(&zero, CERT_ORDER, &base)?)),
            ScenarioKind::Algebraic(p) => Ok(Presentation::Weierstrass(WeierstrassPolynomial::from_poly(p, zero, CERT_ORDER, base)?)),
        }
    }

    /// `M`, `|D|` and `e` for the forced-vanishing test. `M` bounds the
    /// coordinate functions on the complex polydisc around the box with
    /// radii one larger than the half-sides, and is at least 2. The norm
    /// constant is certified with monomial probes on the polydisc over the
    /// unit base disc at the origin whose vertical radius contains the
    /// presented set (the graph, or all roots by the Cauchy bound).
    pub fn certificates(&self) -> Result<Certificates> {
        let n = self.ambient_dim();
        let iv = self.bbox.intervals();
        let mut m_bound: f64 = 2.0;
        for (a, b) in &iv[..n - 1] {
            m_bound = m_bound.max(a.abs().max(b.abs()) + 1.0);
        }
        match &self.kind {
            ScenarioKind::Graph(f) => {
                let radii: Vec<f64> = iv[..n - 1].iter().map(|(a, b)| (b - a) / 2.0 + 1.0).collect();
                let center = self.base_center();
                let c: Vec<f64> = center.iter().map(to_f64).collect();
                let disc = Polydisc::real(&c, &radii)?;
                let model = f.build_model(&center, CERT_ORDER, &disc)?;
                m_bound = m_bound.max(model.sup_norm_bound(&disc)?);
            }
            ScenarioKind::Algebraic(_) => {
                let (a, b) = iv[n - 1];
                m_bound = m_bound.max(a.abs().max(b.abs()) + 1.0);
            }
        }
        let pres = self.presentation()?;
        let base = Polydisc::unit(n - 1);
        let w_radius = match &pres {
            Presentation::Graph(psi) => psi.sup_norm_bound(&base)?.max(1.0),
            Presentation::Weierstrass(f) => {
                let mut r: f64 = 0.0;
                for a in f.coeffs() {
                    r = r.max(a.sup_norm_bound(&base)?);
                }
                1.0 + r
            }
        };
        let outer = base.product(&Polydisc::real(&[0.0], &[w_radius])?);
        let probes = monomial_probes(&vec![Rational::zero(); n], CERT_ORDER, &outer, CERT_PROBE_DEGREE)?;
        let datum = DecompositionDatum::new(outer.clone(), outer, pres.coideal(n)?, 1.0)?;
        let ratio = verify_norm_constant(&datum, &pres, &probes)?;
        Ok(Certificates {
            m: self.m(),
            m_bound,
            norm_constant: ratio.max(1.0),
            e_constant: datum.e_constant,
        })
    }
}

fn square() -> RealBox {
    RealBox::new(vec![(-1.0, 1.0), (-1.0, 1.0)]).expect("valid box")
}

/// A scenario or a family of them.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioRef {
    Single(Scenario),
    Family(Vec<Scenario>),
}

impl ScenarioRef {
    pub fn members(&self) -> Vec<&Scenario> {
        match self {
            ScenarioRef::Single(s) => vec![s],
            ScenarioRef::Family(v) => v.iter().collect(),
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn parse_box(text: Option<&str>, n: usize) -> Result<RealBox> {
    let Some(text) = text else {
        return RealBox::new(vec![(-1.0, 1.0); n]);
    };
    let vals = parse_list(text)?;
    if vals.len() != 2 * n {
        return Err(Error::Parse(format!("box needs {} numbers, got {}", 2 * n, vals.len())));
    }
    RealBox::new(vals.chunks(2).map(|c| (to_f64(&c[0]), to_f64(&c[1]))).collect())
}

/// Resolves a scenario string.
///
/// Built-ins: `circle`, `parabola`, `line`, `exp_graph`, `sin_graph`,
/// `hyperbola:<eps>`, `hyperbola_family[:<eps>,<eps>,..]`.
/// Custom: `graph:<expr in x>` or `graph3:<expr in x,y>` for graphs and
/// `poly:<expr in x,y>` or `poly3:<expr in x,y,z>` for algebraic sets.
/// `bbox` lists `lo,hi` per coordinate and defaults to `[-1, 1]^n`.
pub fn resolve(name: &str, bbox: Option<&str>) -> Result<ScenarioRef> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (name.trim(), None),
    };
    let single = |s: Scenario| Ok(ScenarioRef::Single(s));
    match (head, arg) {
        ("circle", None) => single(Scenario::algebraic("circle", poly("x^2 + y^2 - 1", 2), parse_box(bbox, 2)?)?),
        ("parabola", None) => single(Scenario::algebraic("parabola", poly("y - x^2", 2), parse_box(bbox, 2)?)?),
        ("line", None) => single(Scenario::algebraic("line", poly("y - x/2 - 1/2", 2), parse_box(bbox, 2)?)?),
        ("exp_graph", None) => {
            let b = match bbox {
                Some(_) => parse_box(bbox, 2)?,
                None => RealBox::new(vec![(-1.0, 1.0), (0.0, 3.0)])?,
            };
            single(Scenario::graph("exp_graph", FunctionHandle::parse("exp(x)", &["x"])?, b)?)
        }
        ("sin_graph", None) => single(Scenario::graph("sin_graph", FunctionHandle::parse("sin(x)", &["x"])?, parse_box(bbox, 2)?)?),
        ("hyperbola", Some(a)) => single(Scenario::hyperbola(parse_rational(a)?)),
        ("hyperbola_family", a) => {
            let eps = match a {
                Some(a) => parse_list(a)?,
                None => DEFAULT_FAMILY.iter().map(|&(p, q)| rat(p, q)).collect(),
            };
            Ok(ScenarioRef::Family(eps.into_iter().map(Scenario::hyperbola).collect()))
        }
        ("graph", Some(src)) => single(Scenario::graph(name, FunctionHandle::parse(src, &["x"])?, parse_box(bbox, 2)?)?),
        ("graph3", Some(src)) => single(Scenario::graph(name, FunctionHandle::parse(src, &["x", "y"])?, parse_box(bbox, 3)?)?),
        ("poly", Some(src)) | ("poly3", Some(src)) => {
            let n = if head == "poly" { 2 } else { 3 };
            let h = FunctionHandle::parse(src, var_names(n))?;
            let p = h
                .as_polynomial()
                .cloned()
                .ok_or_else(|| Error::UnsupportedPresentation("poly scenarios need a polynomial".into()))?;
            single(Scenario::algebraic(name, p, parse_box(bbox, n)?)?)
        }
        _ => Err(Error::UnknownScenario(name.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry() {
        for name in ["circle", "parabola", "line", "exp_graph", "sin_graph", "hyperbola:1/10", "graph:x^3", "poly:x*y - 1/2"] {
            assert!(matches!(resolve(name, None).unwrap(), ScenarioRef::Single(_)), "{name}");
        }
        let ScenarioRef::Family(f) = resolve("hyperbola_family", None).unwrap() else { panic!() };
        assert_eq!(f.len(), 4);
        assert!(matches!(resolve("ellipse", None), Err(Error::UnknownScenario(_))));
        assert!(matches!(resolve("graph:exp(", None), Err(Error::Parse(_))));
    }

    #[test]
    fn certificates_of_builtins() {
        let ScenarioRef::Single(c) = resolve("circle", None).unwrap() else { panic!() };
        let cert = c.certificates().unwrap();
        assert_eq!((cert.m, cert.e_constant), (1, 2.0));
        assert!(cert.norm_constant >= 1.0);
        let ScenarioRef::Single(e) = resolve("exp_graph", None).unwrap() else { panic!() };
        let cert = e.certificates().unwrap();
        assert_eq!(cert.e_constant, 1.0);
        assert_eq!(cert.norm_constant, 1.0);
        assert!(cert.m_bound >= std::f64::consts::E.powi(2));
    }
}
