//! Run configuration from flags and `key = value` files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::rational::HeightBound;

/// Keys accepted in configuration files. Each matches a long flag with
/// `_` in place of `-`.
pub const KEYS: [&str; 17] = [
    "scenario",
    "H",
    "eps",
    "degree",
    "seed",
    "out",
    "precision_bits",
    "bbox",
    "suite",
    "tuples",
    "delta",
    "f",
    "base_radius",
    "vertical_radius",
    "boundary_samples",
    "input",
    "max_halvings",
];

/// Parses `key = value` lines. Blank lines and lines starting with `#`
/// are skipped; repeated keys keep the last value.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse(format!("config line {}: expected key = value", no + 1)));
        };
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::Parse(format!("config line {}: unknown key {k:?}", no + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Cover,
    Bounds,
    Weierstrass,
    Plotdata,
}

/// Validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Option<String>,
    pub heights: Vec<u64>,
    pub eps: f64,
    pub degree: u32,
    pub degrees: Vec<u32>,
    pub seed: Option<u64>,
    pub precision_bits: u32,
    pub out: PathBuf,
    pub bbox: Option<String>,
    pub suite: String,
    pub tuples: Option<usize>,
    pub deltas: Vec<f64>,
    pub f: String,
    pub base_radius: f64,
    pub vertical_radius: f64,
    pub boundary_samples: usize,
    pub inputs: Vec<PathBuf>,
    pub max_halvings: u32,
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse {v:?}")))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| num(key, s)).collect()
}

impl RunConfig {
    /// Builds a configuration from merged settings (flags override file
    /// values before this is called).
    pub fn from_map(command: Command, kv: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| kv.get(k).map(|s| s.as_str());
        let default_h = match command {
            Command::Bounds => "50",
            _ => "5",
        };
        let heights: Vec<u64> = list("H", get("H").unwrap_or(default_h))?;
        for &h in &heights {
            HeightBound::new(h)?;
        }
        let eps: f64 = num("eps", get("eps").unwrap_or("1"))?;
        if !(eps > 0.0 && eps <= 16.0) {
            return Err(Error::InvalidParameter(format!("eps must lie in (0, 16], got {eps}")));
        }
        let default_d = match command {
            Command::Bounds => "2,3",
            _ => "2",
        };
        let degrees: Vec<u32> = list("degree", get("degree").unwrap_or(default_d))?;
        if degrees.is_empty() || degrees.iter().any(|d| !(1..=8).contains(d)) {
            return Err(Error::InvalidParameter(format!("degree must lie in 1..=8, got {degrees:?}")));
        }
        if command != Command::Bounds && degrees.len() > 1 {
            return Err(Error::InvalidParameter("a single degree is expected".into()));
        }
        let precision_bits: u32 = num("precision_bits", get("precision_bits").unwrap_or("256"))?;
        if !(64..=4096).contains(&precision_bits) {
            return Err(Error::InvalidParameter(format!("precision-bits must lie in 64..=4096, got {precision_bits}")));
        }
        let seed = get("seed").map(|v| num("seed", v)).transpose()?;
        let suite = get("suite").unwrap_or("both").to_string();
        if !["lower", "upper", "both"].contains(&suite.as_str()) {
            return Err(Error::InvalidParameter(format!("suite must be lower, upper or both, got {suite:?}")));
        }
        let deltas: Vec<f64> = list("delta", get("delta").unwrap_or("0.3,0.1,0.03"))?;
        for &d in &deltas {
            if !(d > 0.0 && d < 0.5) {
                return Err(Error::DeltaTooLarge { delta: d, limit: 0.5 });
            }
        }
        let positive = |k: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidParameter(format!("{k} must be positive, got {v}")))
            }
        };
        let cfg = RunConfig {
            command,
            scenario: get("scenario").map(str::to_string),
            heights,
            eps,
            degree: degrees[0],
            degrees,
            seed,
            precision_bits,
            out: PathBuf::from(get("out").unwrap_or("out")),
            bbox: get("bbox").map(str::to_string),
            suite,
            tuples: get("tuples").map(|v| num("tuples", v)).transpose()?,
            deltas,
            f: get("f").unwrap_or("w^2 - z^2 + 1/2").to_string(),
            base_radius: positive("base_radius", num("base_radius", get("base_radius").unwrap_or("0.3"))?)?,
            vertical_radius: positive("vertical_radius", num("vertical_radius", get("vertical_radius").unwrap_or("1"))?)?,
            boundary_samples: num("boundary_samples", get("boundary_samples").unwrap_or("64"))?,
            inputs: get("input")
                .map(|v| v.split(',').map(|s| PathBuf::from(s.trim())).collect())
                .unwrap_or_default(),
            max_halvings: num("max_halvings", get("max_halvings").unwrap_or("20"))?,
        };
        if matches!(command, Command::Bounds | Command::Weierstrass) && cfg.seed.is_none() {
            return Err(Error::InvalidParameter("--seed is required for randomized suites".into()));
        }
        if command == Command::Cover && cfg.scenario.is_none() {
            return Err(Error::InvalidParameter("--scenario is required".into()));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn parse_lines() {
        let kv = parse_config("# run\nscenario = circle\n\nH = 5, 10\n").unwrap();
        assert_eq!(kv["scenario"], "circle");
        assert_eq!(kv["H"], "5, 10");
        assert!(parse_config("nonsense").is_err());
        assert!(parse_config("colour = red").is_err());
    }

    #[test]
    fn validation() {
        let c = RunConfig::from_map(Command::Cover, &map(&[("scenario", "circle"), ("H", "5,10")])).unwrap();
        assert_eq!(c.heights, vec![5, 10]);
        assert_eq!(c.degree, 2);
        assert!(RunConfig::from_map(Command::Cover, &map(&[])).is_err());
        assert!(RunConfig::from_map(Command::Cover, &map(&[("scenario", "circle"), ("H", "0")])).is_err());
        assert!(RunConfig::from_map(Command::Bounds, &map(&[])).is_err());
        let e = RunConfig::from_map(Command::Bounds, &map(&[("seed", "1"), ("delta", "0.6")])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(RunConfig::from_map(Command::Cover, &map(&[("scenario", "circle"), ("eps", "-1")])).is_err());
    }
}
