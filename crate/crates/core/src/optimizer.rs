//! Coarse-to-fine grid search for the ABEP-minimizing beam width.
//!
//! Stage one scans the bracket at `coarse_step`; stage two rescans
//! `argmin ± coarse_step` at `fine_step`. Ties go to the narrower width. A
//! coarse minimum on the bracket edge is reported as an error instead of
//! being extrapolated.

use crate::abep::{abep, EnergyPoint, PpmConfig};
use crate::error::{Error, Result};
use crate::pointing::{fade_params, PointingGeometry};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Search bracket and step sizes, in units of the aperture radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthSearch {
    pub w_min: f64,
    pub w_max: f64,
    pub coarse_step: f64,
    pub fine_step: f64,
}

impl Default for WidthSearch {
    fn default() -> Self {
        Self {
            w_min: 1.0,
            w_max: 60.0,
            coarse_step: 1.0,
            fine_step: 0.1,
        }
    }
}

impl WidthSearch {
    pub fn validate(&self) -> Result<()> {
        if !(self.w_min > 0.0 && self.w_min < self.w_max && self.w_max.is_finite()) {
            return Err(Error::domain(format!(
                "search bracket must satisfy 0 < w_min < w_max, got [{}, {}]",
                self.w_min, self.w_max
            )));
        }
        if !(self.fine_step > 0.0 && self.fine_step < self.coarse_step) {
            return Err(Error::domain("steps must satisfy 0 < fine_step < coarse_step"));
        }
        if self.coarse_step > self.w_max - self.w_min {
            return Err(Error::domain("coarse step exceeds the bracket"));
        }
        Ok(())
    }

    fn coarse_grid(&self) -> Vec<f64> {
        let n = ((self.w_max - self.w_min) / self.coarse_step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.w_min + k as f64 * self.coarse_step).collect()
    }

    fn fine_grid(&self, center: f64) -> Vec<f64> {
        let half = (self.coarse_step / self.fine_step).round() as i64;
        (-half..=half)
            .map(|k| center + k as f64 * self.fine_step)
            .filter(|&w| w > 0.0)
            .collect()
    }

    /// The same bracket span, moved to sit around `center` (never below `floor`).
    fn recentered(&self, center: f64, floor: f64) -> Self {
        let half = 0.5 * (self.w_max - self.w_min);
        let lo = (center - half).max(floor);
        Self {
            w_min: lo,
            w_max: center + half,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumPoint {
    pub ebn0_db: f64,
    pub w_opt: f64,
    pub abep_min: f64,
    /// Argmin of the coarse stage.
    pub w_coarse: f64,
}

fn evaluate(
    config: &PpmConfig,
    point: EnergyPoint,
    template: &PointingGeometry,
    widths: &[f64],
) -> Result<Vec<f64>> {
    widths
        .par_iter()
        .map(|&w| abep(config, point, &fade_params(&template.with_width(w))?))
        .collect()
}

/// First index of the minimum (ties resolve to the smaller width).
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Minimize the ABEP over the beam width; `template.w_z` is ignored.
pub fn optimize_width(
    config: &PpmConfig,
    point: EnergyPoint,
    template: &PointingGeometry,
    search: &WidthSearch,
) -> Result<OptimumPoint> {
    config.validate()?;
    search.validate()?;
    template.with_width(search.w_min).validate()?;
    let template = template.normalized();

    let coarse = search.coarse_grid();
    let values = evaluate(config, point, &template, &coarse)?;
    let k = argmin(&values);
    if k == 0 || k == coarse.len() - 1 {
        return Err(Error::BracketEdge {
            w_edge: coarse[k],
            w_min: search.w_min,
            w_max: search.w_max,
        });
    }
    let w_coarse = coarse[k];

    let fine = search.fine_grid(w_coarse);
    let fine_values = evaluate(config, point, &template, &fine)?;
    let j = argmin(&fine_values);
    Ok(OptimumPoint {
        ebn0_db: point.db(),
        w_opt: fine[j],
        abep_min: fine_values[j],
        w_coarse,
    })
}

/// One optimization per grid value, errors kept per point.
///
/// With `warm_start` each bracket is re-centered on the last successful
/// optimum (same span, floored at the original `w_min`) and the points are
/// solved in order; otherwise all points run in parallel on the original
/// bracket.
pub fn width_curve_points(
    config: &PpmConfig,
    ebn0_grid_db: &[f64],
    template: &PointingGeometry,
    search: &WidthSearch,
    warm_start: bool,
) -> Vec<Result<OptimumPoint>> {
    let solve = |db: f64, s: &WidthSearch| {
        EnergyPoint::from_db(db).and_then(|p| optimize_width(config, p, template, s))
    };
    if !warm_start {
        return ebn0_grid_db.par_iter().map(|&db| solve(db, search)).collect();
    }
    let mut out = Vec::with_capacity(ebn0_grid_db.len());
    let mut current = *search;
    for &db in ebn0_grid_db {
        let r = solve(db, &current);
        if let Ok(p) = &r {
            current = search.recentered(p.w_opt, search.w_min);
        }
        out.push(r);
    }
    out
}

/// Optimal width versus energy; fails on the first point that fails.
pub fn optimal_width_curve(
    config: &PpmConfig,
    ebn0_grid_db: &[f64],
    template: &PointingGeometry,
    search: &WidthSearch,
    warm_start: bool,
) -> Result<Vec<OptimumPoint>> {
    if ebn0_grid_db.is_empty() {
        return Err(Error::domain("energy grid is empty"));
    }
    width_curve_points(config, ebn0_grid_db, template, search, warm_start)
        .into_iter()
        .collect()
}
