//! Run configuration shared by the flags and the configuration file.

use crate::abep::{EnergyPoint, FadeDistribution, PpmConfig};
use crate::error::{Error, Result};
use crate::optimizer::WidthSearch;
use crate::pointing::PointingGeometry;
use clap::Args;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_Q: u32 = 16;
pub const DEFAULT_M: u32 = 2;
pub const DEFAULT_SYMBOLS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// Every tunable of a run. Lengths are multiples of the aperture radius and
/// energies are in dB.
///
/// The same keys (kebab-case flag names) are accepted in a flat TOML file;
/// a flag given on the command line wins over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// PPM order (power of two, at least 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    /// Noise modes per slot.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Beam width(s), comma separated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wz: Option<String>,
    /// Boresight offset along x, in aperture radii
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_x: Option<f64>,
    /// Boresight offset along y, in aperture radii
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_y: Option<f64>,
    /// Jitter standard deviation along x, in aperture radii
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_x: Option<f64>,
    /// Jitter standard deviation along y, in aperture radii
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_y: Option<f64>,
    /// Fixed collected fraction; replaces the geometry.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    /// Eb/N0 in dB: a value, `-inf`, or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ebn0_db: Option<String>,
    /// Add a zero-energy row in front of the grid.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub include_zero: bool,
    /// Use zero signal energy (same as `--ebn0-db -inf`).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub zero_signal: bool,
    /// Monte Carlo symbols per point.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbols: Option<u64>,
    /// Monte Carlo seed
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Independent generator streams per Monte Carlo point.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chunks: Option<u32>,
    /// Simulate from the analytic fade law instead of the raw geometry.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub sample_fade: bool,
    /// Lower end of the width search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_min: Option<f64>,
    /// Upper end of the width search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_max: Option<f64>,
    /// Coarse grid spacing of the width search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coarse_step: Option<f64>,
    /// Fine grid spacing of the width search
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_step: Option<f64>,
    /// Solve every energy point on the full bracket instead of tracking the
    /// previous optimum.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub no_warm_start: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl RunConfig {
    /// Parse a flat TOML document. Text holding `# config: ` lines (the header
    /// of an earlier output) is reduced to those lines first.
    pub fn from_toml(text: &str) -> Result<Self> {
        let echoed: Vec<&str> = text
            .lines()
            .filter_map(|l| l.strip_prefix(ECHO_PREFIX))
            .collect();
        let body = if echoed.is_empty() { text.to_string() } else { echoed.join("\n") };
        toml::from_str(&body).map_err(|e| usage(format!("bad configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Values set here win; anything unset falls back to `file`.
    pub fn over(self, file: RunConfig) -> Self {
        Self {
            q: self.q.or(file.q),
            m: self.m.or(file.m),
            wz: self.wz.or(file.wz),
            mu_x: self.mu_x.or(file.mu_x),
            mu_y: self.mu_y.or(file.mu_y),
            sigma_x: self.sigma_x.or(file.sigma_x),
            sigma_y: self.sigma_y.or(file.sigma_y),
            t0: self.t0.or(file.t0),
            ebn0_db: self.ebn0_db.or(file.ebn0_db),
            include_zero: self.include_zero || file.include_zero,
            zero_signal: self.zero_signal || file.zero_signal,
            symbols: self.symbols.or(file.symbols),
            seed: self.seed.or(file.seed),
            chunks: self.chunks.or(file.chunks),
            sample_fade: self.sample_fade || file.sample_fade,
            w_min: self.w_min.or(file.w_min),
            w_max: self.w_max.or(file.w_max),
            coarse_step: self.coarse_step.or(file.coarse_step),
            fine_step: self.fine_step.or(file.fine_step),
            no_warm_start: self.no_warm_start || file.no_warm_start,
        }
    }

    /// Fill in the defaults of the PPM, geometry and search keys so the echo
    /// is explicit.
    pub fn with_defaults(mut self) -> Self {
        self.q.get_or_insert(DEFAULT_Q);
        self.m.get_or_insert(DEFAULT_M);
        if self.t0.is_none() {
            self.mu_x.get_or_insert(0.0);
            self.mu_y.get_or_insert(0.0);
            self.sigma_x.get_or_insert(0.0);
            self.sigma_y.get_or_insert(0.0);
        }
        self
    }

    pub fn with_search_defaults(mut self) -> Self {
        let d = WidthSearch::default();
        self.w_min.get_or_insert(d.w_min);
        self.w_max.get_or_insert(d.w_max);
        self.coarse_step.get_or_insert(d.coarse_step);
        self.fine_step.get_or_insert(d.fine_step);
        self
    }

    pub fn with_sim_defaults(mut self) -> Self {
        self.symbols.get_or_insert(DEFAULT_SYMBOLS);
        self.seed.get_or_insert(DEFAULT_SEED);
        self.chunks.get_or_insert(crate::montecarlo::SimSpec::DEFAULT_CHUNKS);
        self
    }

    pub fn ppm(&self) -> Result<PpmConfig> {
        PpmConfig::new(self.q.unwrap_or(DEFAULT_Q), self.m.unwrap_or(DEFAULT_M))
    }

    pub fn widths(&self) -> Result<Vec<f64>> {
        let Some(list) = &self.wz else {
            return Err(usage("--wz is required unless --t0 is given"));
        };
        let widths = list
            .split(',')
            .map(|s| parse_f64(s.trim(), "--wz"))
            .collect::<Result<Vec<_>>>()?;
        if widths.is_empty() {
            return Err(usage("--wz is empty"));
        }
        Ok(widths)
    }

    /// Geometry template (beam width from `w_z`), lengths in units of `a`.
    pub fn geometry(&self, w_z: f64) -> PointingGeometry {
        PointingGeometry::in_aperture_units(
            w_z,
            self.mu_x.unwrap_or(0.0),
            self.mu_y.unwrap_or(0.0),
            self.sigma_x.unwrap_or(0.0),
            self.sigma_y.unwrap_or(0.0),
        )
    }

    pub fn fixed_fade(&self) -> Option<FadeDistribution> {
        self.t0.map(|t0| FadeDistribution::Deterministic { t0 })
    }

    /// Energy grid in dB, with the zero-energy row first when requested.
    pub fn energy_grid(&self) -> Result<Vec<f64>> {
        let mut grid = Vec::new();
        if self.zero_signal || self.include_zero {
            grid.push(f64::NEG_INFINITY);
        }
        if !self.zero_signal {
            match &self.ebn0_db {
                Some(spec) => grid.extend(parse_grid(spec)?),
                None if grid.is_empty() => return Err(usage("--ebn0-db is required")),
                None => {}
            }
        }
        for db in &grid {
            EnergyPoint::from_db(*db)?;
        }
        Ok(grid)
    }

    pub fn search(&self) -> WidthSearch {
        let d = WidthSearch::default();
        WidthSearch {
            w_min: self.w_min.unwrap_or(d.w_min),
            w_max: self.w_max.unwrap_or(d.w_max),
            coarse_step: self.coarse_step.unwrap_or(d.coarse_step),
            fine_step: self.fine_step.unwrap_or(d.fine_step),
        }
    }

    /// `# config: key = value` lines for an output header.
    pub fn echo(&self) -> String {
        let body = toml::to_string(self).expect("flat table serializes");
        body.lines()
            .map(|l| format!("{ECHO_PREFIX}{l}\n"))
            .collect()
    }
}

pub const ECHO_PREFIX: &str = "# config: ";

fn parse_f64(s: &str, flag: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| usage(format!("{flag}: cannot parse {s:?} as a number")))
}

/// `x`, `-inf`, or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [x] => Ok(vec![parse_f64(x, "--ebn0-db")?]),
        [a, b, s] => {
            let (start, stop, step) = (
                parse_f64(a, "--ebn0-db")?,
                parse_f64(b, "--ebn0-db")?,
                parse_f64(s, "--ebn0-db")?,
            );
            if ![start, stop, step].iter().all(|v| v.is_finite()) || step <= 0.0 || stop < start {
                return Err(usage(format!(
                    "--ebn0-db range {spec:?} needs finite start <= stop and step > 0"
                )));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| start + k as f64 * step).collect())
        }
        _ => Err(usage(format!("--ebn0-db: expected x or start:stop:step, got {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("3.0103").unwrap(), vec![3.0103]);
        assert_eq!(parse_grid("-inf").unwrap(), vec![f64::NEG_INFINITY]);
        let g = parse_grid("0:40:0.5").unwrap();
        assert_eq!(g.len(), 81);
        assert_eq!(g[80], 40.0);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let flags = RunConfig { q: Some(4), ..Default::default() };
        let file = RunConfig::from_toml("q = 8\nm = 3\nwz = \"15,20\"\n").unwrap();
        let r = flags.over(file);
        assert_eq!((r.q, r.m), (Some(4), Some(3)));
        assert_eq!(r.widths().unwrap(), vec![15.0, 20.0]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("qq = 1").is_err());
    }

    #[test]
    fn echo_round_trips() {
        let c = RunConfig {
            q: Some(16),
            mu_x: Some(0.1 + 0.2),
            sigma_x: Some(1e-300),
            ebn0_db: Some("0:40:0.5".into()),
            include_zero: true,
            ..Default::default()
        };
        let header = format!("# tool\n{}w_z,ebn0_db\n", c.echo());
        assert_eq!(RunConfig::from_toml(&header).unwrap(), c);
    }

    #[test]
    fn zero_signal_grid() {
        let c = RunConfig { zero_signal: true, ..Default::default() };
        assert_eq!(c.energy_grid().unwrap(), vec![f64::NEG_INFINITY]);
        let c = RunConfig { include_zero: true, ebn0_db: Some("1".into()), ..Default::default() };
        assert_eq!(c.energy_grid().unwrap(), vec![f64::NEG_INFINITY, 1.0]);
        assert!(RunConfig::default().energy_grid().is_err());
    }
}
