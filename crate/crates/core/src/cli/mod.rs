//! Command-line front end.
//!
//! Subcommands `params`, `abep`, `optimize`, `simulate` and `reproduce` write
//! CSV (or TOML records) with `#` comment lines on top. The comment block
//! always holds the fully resolved configuration as `# config: key = value`
//! lines, and `--config` accepts either a flat TOML file or a previous output,
//! so any run can be repeated exactly.
//!
//! Exit statuses: 0 success, 1 i/o failure, 2 usage or domain error (also a
//! bracket-edge optimum), 3 numerical failure. Per-row failures are written as
//! flagged rows and then reported through the exit status.

pub mod config;
pub mod output;
pub mod reproduce;

pub use config::RunConfig;
pub use reproduce::{render_curve, scenarios, write_figure, Curve, CurveKind, Figure};

use crate::abep::{abep, EnergyPoint, FadeDistribution};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_abep, SimSource, SimSpec};
use crate::optimizer::width_curve_points;
use crate::pointing::{equivalent_beam, fade_params};
use clap::{Args, Parser, Subcommand};
use output::{fmt_f64, header, status};
use rayon::prelude::*;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "ppm-pointing", version, about = "PPM bit-error analysis under pointing errors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the beam and fade parameters from the geometry.
    Params(RunArgs),
    /// ABEP versus Eb/N0 for each beam width.
    Abep(RunArgs),
    /// ABEP-minimizing beam width versus Eb/N0.
    Optimize(RunArgs),
    /// Monte Carlo estimate of the ABEP.
    Simulate(RunArgs),
    /// Write the CSV curves of one figure scenario set.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub flags: RunConfig,
    /// Flat TOML file (or an earlier output) supplying default values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    pub figure: Figure,
    /// Directory receiving one CSV per curve.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        Error::Domain(_) | Error::Config(_) | Error::BracketEdge { .. } => 2,
        Error::NonConvergence { .. } | Error::Cancellation { .. } => 3,
    }
}

/// Rendered output plus the most severe per-row failure, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub worst: Option<Error>,
}

impl Rendered {
    fn note(&mut self, e: &Error) {
        let worse = match &self.worst {
            None => true,
            Some(w) => exit_code(e) > exit_code(w),
        };
        if worse {
            self.worst = Some(e.clone());
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.worst.as_ref().map_or(0, exit_code)
    }
}

/// Run a parsed command line and return the exit status.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Reproduce(args) => {
            reproduce::write_figure(args.figure, &args.out)?;
            Ok(0)
        }
        Command::Params(args) => emit(&args, render_params),
        Command::Abep(args) => emit(&args, |c| render_abep(c, &[])),
        Command::Optimize(args) => emit(&args, |c| render_optimize(c, &[])),
        Command::Simulate(args) => emit(&args, render_simulate),
    }
}

fn emit(args: &RunArgs, render: impl Fn(&RunConfig) -> Result<Rendered>) -> Result<i32> {
    let file = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = args.flags.clone().over(file);
    let r = render(&cfg)?;
    match &args.out {
        Some(p) => std::fs::write(p, &r.text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => std::io::stdout().lock().write_all(r.text.as_bytes())?,
    }
    if let Some(e) = &r.worst {
        log::warn!("some rows were flagged: {e}");
    }
    Ok(r.exit_code())
}

/// Beam and fade parameters as TOML records, one `[[beam]]` per width.
pub fn render_params(cfg: &RunConfig) -> Result<Rendered> {
    let cfg = cfg.clone().with_defaults();
    if cfg.t0.is_some() {
        return Err(Error::Config("params derives the fade from geometry; drop --t0".into()));
    }
    let mut text = header("params", &[], &cfg);
    for w in cfg.widths()? {
        let g = cfg.geometry(w);
        let beam = equivalent_beam(&g)?;
        text.push_str("[[beam]]\n");
        for (k, v) in [("w_z", w), ("v", beam.v), ("a0", beam.a0), ("w_zeq", beam.w_zeq)] {
            text.push_str(&format!("{k} = {}\n", fmt_f64(v)));
        }
        match fade_params(&g)? {
            FadeDistribution::Deterministic { t0 } => {
                text.push_str(&format!("kind = \"deterministic\"\nt0 = {}\n", fmt_f64(t0)));
            }
            FadeDistribution::Gamma(f) => {
                text.push_str(&format!(
                    "kind = \"gamma\"\nphi2 = {}\na = {}\n",
                    fmt_f64(f.phi2),
                    fmt_f64(f.a)
                ));
            }
        }
    }
    Ok(Rendered { text, worst: None })
}

/// `(label, fade)` per curve: the fixed fraction, or one per beam width.
fn curves(cfg: &RunConfig) -> Result<Vec<(String, FadeDistribution)>> {
    if let Some(f) = cfg.fixed_fade() {
        f.validate()?;
        return Ok(vec![(String::new(), f)]);
    }
    cfg.widths()?
        .into_iter()
        .map(|w| Ok((fmt_f64(w), fade_params(&cfg.geometry(w))?)))
        .collect()
}

/// CSV `w_z,ebn0_db,abep,status`; the width column is empty for `--t0`.
pub fn render_abep(cfg: &RunConfig, extra: &[String]) -> Result<Rendered> {
    let cfg = cfg.clone().with_defaults();
    let ppm = cfg.ppm()?;
    let grid = cfg.energy_grid()?;
    let curves = curves(&cfg)?;
    let jobs: Vec<(&str, &FadeDistribution, f64)> = curves
        .iter()
        .flat_map(|(label, fade)| grid.iter().map(move |&db| (label.as_str(), fade, db)))
        .collect();
    let values: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(_, fade, db)| abep(&ppm, EnergyPoint::from_db(db)?, fade))
        .collect();

    let mut r = Rendered {
        text: header("abep", extra, &cfg),
        worst: None,
    };
    r.text.push_str("w_z,ebn0_db,abep,status\n");
    for ((label, _, db), v) in jobs.iter().zip(values) {
        let (value, st) = match v {
            Ok(p) => (fmt_f64(p), status(None)),
            Err(e) => {
                r.note(&e);
                (String::new(), status(Some(&e)))
            }
        };
        r.text.push_str(&format!("{label},{},{value},{st}\n", fmt_f64(*db)));
    }
    Ok(r)
}

/// CSV `ebn0_db,w_opt,abep_min,status`.
pub fn render_optimize(cfg: &RunConfig, extra: &[String]) -> Result<Rendered> {
    let mut cfg = cfg.clone().with_defaults().with_search_defaults();
    if cfg.t0.is_some() {
        return Err(Error::Config("optimize needs a geometry; drop --t0".into()));
    }
    // the width is the search variable
    cfg.wz = None;
    let ppm = cfg.ppm()?;
    let grid = cfg.energy_grid()?;
    let search = cfg.search();
    search.validate()?;
    let template = cfg.geometry(search.w_min);
    template.validate()?;
    let points = width_curve_points(&ppm, &grid, &template, &search, !cfg.no_warm_start);

    let mut r = Rendered {
        text: header("optimize", extra, &cfg),
        worst: None,
    };
    r.text.push_str("ebn0_db,w_opt,abep_min,status\n");
    for (db, p) in grid.iter().zip(points) {
        let line = match p {
            Ok(p) => format!("{},{},{},ok\n", fmt_f64(*db), fmt_f64(p.w_opt), fmt_f64(p.abep_min)),
            Err(e) => {
                r.note(&e);
                format!("{},,,{}\n", fmt_f64(*db), status(Some(&e)))
            }
        };
        r.text.push_str(&line);
    }
    Ok(r)
}

/// One `[[record]]` per beam width and energy point.
pub fn render_simulate(cfg: &RunConfig) -> Result<Rendered> {
    let cfg = cfg.clone().with_defaults().with_sim_defaults();
    let ppm = cfg.ppm()?;
    let grid = cfg.energy_grid()?;
    let (n, seed, chunks) = (
        cfg.symbols.unwrap_or_default(),
        cfg.seed.unwrap_or_default(),
        cfg.chunks.unwrap_or_default(),
    );
    let sources: Vec<(Option<f64>, SimSource)> = match cfg.fixed_fade() {
        Some(f) => vec![(None, SimSource::Fade(f))],
        None => cfg
            .widths()?
            .into_iter()
            .map(|w| {
                let g = cfg.geometry(w);
                let src = if cfg.sample_fade {
                    SimSource::Fade(fade_params(&g)?)
                } else {
                    g.validate()?;
                    SimSource::Geometry(g)
                };
                Ok((Some(w), src))
            })
            .collect::<Result<_>>()?,
    };

    let mut text = header("simulate", &[], &cfg);
    for (w, source) in &sources {
        for &db in &grid {
            let spec = SimSpec::new(ppm, EnergyPoint::from_db(db)?, *source, n, seed).with_chunks(chunks);
            let s = simulate_abep(&spec)?;
            text.push_str("[[record]]\n");
            if let Some(w) = w {
                text.push_str(&format!("w_z = {}\n", fmt_f64(*w)));
            }
            text.push_str(&format!(
                "ebn0_db = {}\nabep_estimate = {}\nstd_error = {}\nn_symbols = {}\nsymbol_errors = {}\nseed = {}\n",
                fmt_f64(db),
                fmt_f64(s.abep_estimate),
                fmt_f64(s.std_error),
                s.n_symbols,
                s.symbol_errors,
                seed
            ));
        }
    }
    Ok(Rendered { text, worst: None })
}
