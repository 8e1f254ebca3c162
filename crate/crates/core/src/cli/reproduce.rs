//! Scenario sets behind the figure reproductions.
//!
//! Each curve is an ordinary `abep` or `optimize` run; its CSV header carries
//! the configuration, so any file can be regenerated with
//! `ppm-pointing <command> --config <file>`.

use super::config::RunConfig;
use super::{render_abep, render_optimize, Rendered};
use crate::error::{Error, Result};
use clap::ValueEnum;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// 16-PPM ABEP, static misalignment of 10a.
    Fig2a,
    /// As fig2a with unit jitter.
    Fig2b,
    /// Optimal width for several misalignment and jitter levels.
    Fig3a,
    /// Optimal width for several (Q, M) pairs.
    Fig3b,
}

impl Figure {
    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Abep,
    Optimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub file: String,
    pub kind: CurveKind,
    pub config: RunConfig,
}

/// Eb/N0 grid of the ABEP figures; wide enough to hold the M = 200 crossing.
pub const FIG2_GRID: &str = "0:50:0.5";
pub const FIG3_GRID: &str = "0:40:1";

fn base(q: u32, m: u32, mu_x: f64, sigma: f64, grid: &str) -> RunConfig {
    RunConfig {
        q: Some(q),
        m: Some(m),
        mu_x: Some(mu_x),
        mu_y: Some(0.0),
        sigma_x: Some(sigma),
        sigma_y: Some(sigma),
        ebn0_db: Some(grid.to_string()),
        ..Default::default()
    }
}

/// The curves of one figure, in output order.
pub fn scenarios(figure: Figure) -> Vec<Curve> {
    let id = figure.id();
    match figure {
        Figure::Fig2a | Figure::Fig2b => {
            let sigma = if figure == Figure::Fig2a { 0.0 } else { 1.0 };
            let mut out = Vec::new();
            for m in [2, 200] {
                for w in [10, 15, 20, 25] {
                    out.push(Curve {
                        file: format!("{id}_m{m}_wz{w}.csv"),
                        kind: CurveKind::Abep,
                        config: RunConfig {
                            wz: Some(w.to_string()),
                            ..base(16, m, 10.0, sigma, FIG2_GRID)
                        },
                    });
                }
            }
            out
        }
        Figure::Fig3a => [(0, 1), (5, 1), (10, 1), (10, 2)]
            .into_iter()
            .map(|(mu, s)| Curve {
                file: format!("{id}_mu{mu}_sigma{s}.csv"),
                kind: CurveKind::Optimize,
                config: base(16, 2, mu as f64, s as f64, FIG3_GRID),
            })
            .collect(),
        Figure::Fig3b => [(2, 2), (16, 2), (2, 200), (16, 200)]
            .into_iter()
            .map(|(q, m)| Curve {
                file: format!("{id}_q{q}_m{m}.csv"),
                kind: CurveKind::Optimize,
                config: base(q, m, 10.0, 1.0, FIG3_GRID),
            })
            .collect(),
    }
}

pub fn render_curve(figure: Figure, curve: &Curve) -> Result<Rendered> {
    let extra = [format!(
        "scenario: {} (reconstructed; axis ranges and parameter sets chosen for reproduction)",
        figure.id()
    )];
    match curve.kind {
        CurveKind::Abep => render_abep(&curve.config, &extra),
        CurveKind::Optimize => render_optimize(&curve.config, &extra),
    }
}

pub fn write_figure(figure: Figure, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for curve in scenarios(figure) {
        let r = render_curve(figure, &curve)?;
        let path = dir.join(&curve.file);
        std::fs::write(&path, &r.text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        match &r.worst {
            Some(e) => log::warn!("{}: flagged rows ({e})", path.display()),
            None => log::info!("wrote {}", path.display()),
        }
    }
    Ok(())
}
