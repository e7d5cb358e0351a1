//! Command-line surface: `cover`, `bounds`, `weierstrass` and `plotdata`.
//!
//! Exit codes: 0 when every verdict passes, 2 for configuration errors, 3
//! for verdict failures, 4 for numerical precision failures and 1 for I/O.

pub mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use config::{read_config, Command, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "ratcover", version, about = "Cover rational points of bounded height by algebraic hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Harvest points, cover them by hypersurfaces and classify them.
    Cover(Common),
    /// Check determinant upper and lower bounds on seeded tuples.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// lower, upper or both.
        #[arg(long)]
        suite: Option<String>,
        /// Tuples in the lower suite, or per (degree, delta) in the upper one.
        #[arg(long)]
        tuples: Option<String>,
        /// Comma-separated interval lengths for the upper suite.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Certify a Weierstrass polydisc, sweep division norms and tabulate
    /// Hilbert–Samuel functions.
    Weierstrass {
        #[command(flatten)]
        common: Common,
        /// Function of z and w to certify.
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        base_radius: Option<String>,
        #[arg(long)]
        vertical_radius: Option<String>,
        #[arg(long)]
        boundary_samples: Option<String>,
        /// Number of random staircases.
        #[arg(long)]
        tuples: Option<String>,
    },
    /// Turn cover reports into (H, count, envelope) rows.
    Plotdata {
        #[command(flatten)]
        common: Common,
        /// Cover report JSON files.
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// Height bound, or a comma-separated grid.
    #[arg(long = "H")]
    h: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    precision_bits: Option<String>,
    /// Box as lo,hi pairs: `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    bbox: Option<String>,
    #[arg(long)]
    max_halvings: Option<String>,
}

fn put(kv: &mut BTreeMap<String, String>, k: &str, v: Option<String>) {
    if let Some(v) = v {
        kv.insert(k.to_string(), v);
    }
}

fn merged(common: Common, extra: Vec<(&str, Option<String>)>) -> Result<BTreeMap<String, String>> {
    let mut kv = match &common.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    put(&mut kv, "scenario", common.scenario);
    put(&mut kv, "H", common.h);
    put(&mut kv, "eps", common.eps);
    put(&mut kv, "degree", common.degree);
    put(&mut kv, "seed", common.seed);
    put(&mut kv, "out", common.out.map(|p| p.display().to_string()));
    put(&mut kv, "precision_bits", common.precision_bits);
    put(&mut kv, "bbox", common.bbox);
    put(&mut kv, "max_halvings", common.max_halvings);
    for (k, v) in extra {
        put(&mut kv, k, v);
    }
    Ok(kv)
}

fn configure(cmd: Cmd) -> Result<RunConfig> {
    let (command, kv) = match cmd {
        Cmd::Cover(c) => (Command::Cover, merged(c, vec![])?),
        Cmd::Bounds { common, suite, tuples, delta } => (
            Command::Bounds,
            merged(common, vec![("suite", suite), ("tuples", tuples), ("delta", delta)])?,
        ),
        Cmd::Weierstrass { common, f, base_radius, vertical_radius, boundary_samples, tuples } => (
            Command::Weierstrass,
            merged(
                common,
                vec![
                    ("f", f),
                    ("base_radius", base_radius),
                    ("vertical_radius", vertical_radius),
                    ("boundary_samples", boundary_samples),
                    ("tuples", tuples),
                ],
            )?,
        ),
        Cmd::Plotdata { common, input } => {
            let joined = (!input.is_empty())
                .then(|| input.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","));
            (Command::Plotdata, merged(common, vec![("input", joined)])?)
        }
    };
    RunConfig::from_map(command, &kv)
}

fn execute(cfg: &RunConfig) -> Result<commands::Outcome> {
    match cfg.command {
        Command::Cover => commands::cmd_cover(cfg),
        Command::Bounds => commands::cmd_bounds(cfg),
        Command::Weierstrass => commands::cmd_weierstrass(cfg),
        Command::Plotdata => commands::cmd_plotdata(cfg),
    }
}

fn name(c: Command) -> &'static str {
    match c {
        Command::Cover => "cover",
        Command::Bounds => "bounds",
        Command::Weierstrass => "weierstrass",
        Command::Plotdata => "plotdata",
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let cfg = match configure(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(&cfg) {
        Ok(out) => {
            println!("{}", out.summary);
            if let Err(e) = output::write_meta(&cfg.out, name(cfg.command), &out.outputs, start.elapsed()) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            if out.passed {
                0
            } else {
                eprintln!("error: verdict failure");
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
