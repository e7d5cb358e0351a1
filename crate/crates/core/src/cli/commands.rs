//! The four subcommands. Each returns the files it wrote and whether every
//! verdict passed; errors carry their own exit codes.

use std::collections::HashMap;
use std::path::PathBuf;

use serde::Serialize;

use super::config::RunConfig;
use super::output::{slug, write_csv, write_json};
use crate::analytic::{FunctionHandle, Polydisc};
use crate::error::{Error, Result};
use crate::explorer::descent::DEFAULT_TOL;
use crate::explorer::sweep::UNIFORMITY_BOUND;
use crate::explorer::{
    cover, dimension_descent, family_summary, resolve, verify_epsilon_bound, CoverOptions, CoveringReport,
    DescentReport, Scenario, ScenarioRef,
};
use crate::rational::{int, HeightBound};
use crate::suites::{
    hyperbola_params, hyperbola_suite, lower_bound_suite, staircase_suite, upper_bound_suite, BoundSuite, HyperbolaRow,
};
use crate::weierstrass::{certify_weierstrass_polydisc, e_constant, CoIdeal};

pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub passed: bool,
    pub summary: String,
}

#[derive(Serialize)]
struct CoverFile<'a> {
    report: &'a CoveringReport,
    descent: Option<&'a DescentReport>,
}

fn point_rows(r: &CoveringReport, d: Option<&DescentReport>) -> Vec<Vec<String>> {
    let class: HashMap<String, String> = d
        .map(|d| {
            d.witnesses
                .iter()
                .map(|w| (w.point.to_string(), format!("{:?}", w.classification).to_lowercase()))
                .collect()
        })
        .unwrap_or_default();
    let mut rows = Vec::new();
    for b in &r.boxes {
        let index: Vec<String> = b.index.iter().map(u64::to_string).collect();
        for &i in &b.points {
            let p = &r.points[i];
            let mut row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            row.push(index.join(":"));
            row.push(b.hypersurface.to_string());
            row.push(class.get(&p.to_string()).cloned().unwrap_or_default());
            rows.push(row);
        }
    }
    rows.sort();
    rows
}

pub fn cmd_cover(cfg: &RunConfig) -> Result<Outcome> {
    let name = cfg.scenario.as_deref().expect("validated");
    let sref = resolve(name, cfg.bbox.as_deref())?;
    let members = sref.members();
    let opts = CoverOptions {
        max_halvings: cfg.max_halvings,
        precision_bits: cfg.precision_bits,
        ..CoverOptions::default()
    };
    let mut outputs = Vec::new();
    let mut passed = true;
    let mut lines = Vec::new();
    let mut per_member: Vec<Vec<(CoveringReport, Option<DescentReport>)>> = Vec::new();
    for s in &members {
        let mut runs = Vec::new();
        for &h in &cfg.heights {
            let r = cover(s, HeightBound::new(h)?, cfg.eps, cfg.degree, &opts)?;
            let d = if s.ambient_dim() == 2 {
                Some(dimension_descent(s, &r, DEFAULT_TOL)?)
            } else {
                None
            };
            let stem = format!("cover_{}_H{h}", slug(&s.name));
            let json = cfg.out.join(format!("{stem}.json"));
            write_json(&json, &CoverFile { report: &r, descent: d.as_ref() })?;
            let csv = cfg.out.join(format!("{stem}_points.csv"));
            let mut header: Vec<&str> = crate::explorer::scenario::var_names(s.ambient_dim()).to_vec();
            header.extend(["box", "hypersurface", "classification"]);
            write_csv(&csv, &header, &point_rows(&r, d.as_ref()))?;
            outputs.extend([json, csv]);
            passed &= r.verdicts.all();
            lines.push(format!(
                "{} H={h}: {} points, {} boxes, {} hypersurfaces{}",
                s.name,
                r.points.len(),
                r.boxes.len(),
                r.hypersurfaces.len(),
                d.as_ref()
                    .map(|d| format!(", {} algebraic, {} transcendental", d.algebraic, d.transcendental))
                    .unwrap_or_default()
            ));
            runs.push((r, d));
        }
        let planar: Vec<_> = runs
            .iter()
            .filter_map(|(r, d)| d.as_ref().map(|d| (r.clone(), d.clone())))
            .collect();
        if cfg.heights.len() > 1 && planar.len() == runs.len() {
            let table = verify_epsilon_bound(&planar)?;
            let path = cfg.out.join(format!("epsilon_{}.json", slug(&s.name)));
            write_json(&path, &table)?;
            outputs.push(path);
            lines.push(format!("{}: empirical N = {}", s.name, table.n_empirical));
        }
        per_member.push(runs);
    }
    if let ScenarioRef::Family(_) = sref {
        for (k, &h) in cfg.heights.iter().enumerate() {
            let runs: Vec<(&Scenario, CoveringReport, DescentReport)> = members
                .iter()
                .zip(&per_member)
                .filter_map(|(s, runs)| runs[k].1.clone().map(|d| (*s, runs[k].0.clone(), d)))
                .collect();
            let sw = family_summary(&runs)?;
            let path = cfg.out.join(format!("family_{}_H{h}.json", slug(name)));
            write_json(&path, &sw)?;
            outputs.push(path);
            passed &= sw.uniform;
            lines.push(format!(
                "family H={h}: max hypersurfaces {}, max norm constant {}, uniform {}",
                sw.max_hypersurfaces, sw.max_norm_constant, sw.uniform
            ));
        }
    }
    Ok(Outcome {
        outputs,
        passed,
        summary: lines.join("\n"),
    })
}

const BOUND_HEADER: [&str; 11] =
    ["tuple_id", "scenario", "degree", "delta", "height", "value", "radius", "sign", "upper", "lower", "verdict"];

fn bound_rows(s: &BoundSuite) -> Vec<Vec<String>> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    s.rows
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.scenario.clone(),
                r.degree.to_string(),
                opt(r.delta.map(|d| d.to_string())),
                r.height.to_string(),
                r.value.clone(),
                r.radius.to_string(),
                serde_json::to_value(r.sign).expect("enum").as_str().unwrap_or_default().to_string(),
                opt(r.upper.map(|u| format!("{u:e}"))),
                opt(r.lower.clone()),
                format!("{:?}", r.verdict).to_lowercase(),
            ]
        })
        .collect()
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    seed: u64,
    tuples: usize,
    violations: usize,
    zeros: usize,
    indeterminate: usize,
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.seed.expect("validated");
    let mut suites = Vec::new();
    if cfg.suite != "upper" {
        suites.push(lower_bound_suite(cfg.heights[0], cfg.tuples.unwrap_or(1000), seed)?);
    }
    if cfg.suite != "lower" {
        suites.push(upper_bound_suite(&cfg.degrees, &cfg.deltas, cfg.tuples.unwrap_or(200), seed, cfg.precision_bits)?);
    }
    let mut outputs = Vec::new();
    let mut lines = Vec::new();
    let mut passed = true;
    for s in &suites {
        let csv = cfg.out.join(format!("bounds_{}.csv", s.suite));
        write_csv(&csv, &BOUND_HEADER, &bound_rows(s))?;
        let json = cfg.out.join(format!("bounds_{}.json", s.suite));
        write_json(
            &json,
            &SuiteSummary {
                suite: &s.suite,
                seed: s.seed,
                tuples: s.rows.len(),
                violations: s.violations,
                zeros: s.zeros,
                indeterminate: s.indeterminate,
            },
        )?;
        outputs.extend([csv, json]);
        passed &= s.violations == 0;
        lines.push(format!(
            "{} suite: {} tuples, {} violations, {} zero, {} of unknown sign",
            s.suite,
            s.rows.len(),
            s.violations,
            s.zeros,
            s.indeterminate
        ));
    }
    Ok(Outcome {
        outputs,
        passed,
        summary: lines.join("\n"),
    })
}

#[derive(Serialize)]
struct PolydiscReport {
    f: String,
    base_radius: f64,
    vertical_radius: f64,
    boundary_samples: usize,
    roots: u32,
    integrals: Vec<f64>,
    e_constant: f64,
}

#[derive(Serialize)]
struct WeierstrassFile<'a> {
    polydisc: PolydiscReport,
    division: &'a [HyperbolaRow],
    max_norm_constant: f64,
    max_division_ratio: f64,
    staircases: usize,
    staircases_match: bool,
}

pub fn cmd_weierstrass(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.seed.expect("validated");
    let f = FunctionHandle::parse(&cfg.f, &["z", "w"])?;
    let domain = Polydisc::real(&[0.0, 0.0], &[cfg.base_radius, cfg.vertical_radius])?;
    let model = f.build_model(&[int(0), int(0)], 16, &domain)?;
    let cert = certify_weierstrass_polydisc(
        &model,
        &Polydisc::real(&[0.0], &[cfg.base_radius])?,
        &Polydisc::real(&[0.0], &[cfg.vertical_radius])?,
        cfg.boundary_samples,
        crate::weierstrass::winding::DEFAULT_QUADRATURE,
    )?;
    let polydisc = PolydiscReport {
        f: cfg.f.clone(),
        base_radius: cfg.base_radius,
        vertical_radius: cfg.vertical_radius,
        boundary_samples: cfg.boundary_samples,
        roots: cert.degree,
        integrals: cert.integrals.clone(),
        e_constant: e_constant(&CoIdeal::weierstrass(2, cert.degree)?, crate::weierstrass::coideal::DEFAULT_K_PROBE),
    };

    let params = match cfg.scenario.as_deref() {
        None => hyperbola_params(),
        Some(name) => resolve(name, cfg.bbox.as_deref())?
            .members()
            .iter()
            .map(|s| {
                s.parameter
                    .clone()
                    .ok_or_else(|| Error::InvalidParameter(format!("{} is not a hyperbola member", s.name)))
            })
            .collect::<Result<_>>()?,
    };
    let rows = hyperbola_suite(&params)?;
    let max_norm = rows.iter().map(|r| r.norm_constant).fold(0.0, f64::max);
    let max_ratio = rows.iter().map(|r| r.division_ratio).fold(0.0, f64::max);

    let stairs = staircase_suite(cfg.tuples.unwrap_or(50), seed, 20)?;
    let stairs_ok = stairs.iter().all(|r| r.ok());
    let mut table = Vec::new();
    for r in &stairs {
        let gens: Vec<String> = r
            .generators
            .iter()
            .map(|g| g.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        for (k, (a, b)) in r.formula.iter().zip(&r.brute).enumerate() {
            table.push(vec![
                r.id.to_string(),
                r.n.to_string(),
                gens.join(";"),
                r.dim.to_string(),
                k.to_string(),
                a.to_string(),
                b.to_string(),
                r.e_constant.to_string(),
            ]);
        }
    }
    let csv = cfg.out.join("hilbert_samuel.csv");
    write_csv(&csv, &["staircase", "n", "generators", "dim", "k", "formula", "brute_force", "e_constant"], &table)?;
    let json = cfg.out.join("weierstrass.json");
    let roots = polydisc.roots;
    write_json(
        &json,
        &WeierstrassFile {
            polydisc,
            division: &rows,
            max_norm_constant: max_norm,
            max_division_ratio: max_ratio,
            staircases: stairs.len(),
            staircases_match: stairs_ok,
        },
    )?;
    Ok(Outcome {
        outputs: vec![json, csv],
        passed: max_norm <= UNIFORMITY_BOUND && stairs_ok,
        summary: format!(
            "{roots} roots in the vertical disc; max norm constant {max_norm} (raw division ratio {max_ratio}) over {} members; {} staircases {}",
            rows.len(),
            stairs.len(),
            if stairs_ok { "match brute force" } else { "MISMATCH" }
        ),
    })
}

pub fn cmd_plotdata(cfg: &RunConfig) -> Result<Outcome> {
    let mut points = Vec::new();
    for path in &cfg.inputs {
        let text = std::fs::read_to_string(path).map_err(|_| Error::MissingInput(path.display().to_string()))?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        let field = |ptr: &str| {
            v.pointer(ptr)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("{}: missing {ptr}", path.display())))
        };
        let h = field("/report/height")?.as_u64().ok_or_else(|| Error::Parse("height".into()))?;
        let eps = field("/report/eps")?.as_f64().ok_or_else(|| Error::Parse("eps".into()))?;
        let count = field("/descent/transcendental")?
            .as_u64()
            .ok_or_else(|| Error::Parse(format!("{}: no descent data", path.display())))?;
        points.push((h, eps, count));
    }
    points.sort_by_key(|p| p.0);
    if points.windows(2).any(|w| w[0].1 != w[1].1) {
        return Err(Error::InvalidParameter("reports differ in eps".into()));
    }
    let n = points
        .iter()
        .map(|&(h, eps, c)| c as f64 / (h as f64).powf(eps))
        .fold(0.0, f64::max);
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|&(h, eps, c)| vec![h.to_string(), c.to_string(), (n * (h as f64).powf(eps)).to_string()])
        .collect();
    let csv = cfg.out.join("plot.csv");
    write_csv(&csv, &["H", "transcendental", "envelope"], &rows)?;
    Ok(Outcome {
        outputs: vec![csv],
        passed: true,
        summary: format!("{} heights, N = {n}", rows.len()),
    })
}
