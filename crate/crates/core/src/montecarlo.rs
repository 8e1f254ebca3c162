//! Symbol-level Monte Carlo model of the soft-decision PPM receiver.
//!
//! Each symbol draws a collected fraction `t`, then the `Q` slot statistics:
//! noise slots are `Gamma(M, 1)` (a central chi-square with `2M` degrees of
//! freedom, scaled to unit mean per mode), and the signal slot is the
//! noncentral counterpart with load `ξ = t·(E_b/N₀)·log₂Q`, sampled as
//! `Gamma(M + J, 1)` with `J ~ Poisson(ξ)`. The symbol is in error when a noise
//! slot wins the maximum; ties are split uniformly.
//!
//! Work is split into chunks, each with its own ChaCha stream selected by the
//! chunk index, so a fixed `(seed, chunks)` pair gives bit-identical counts
//! regardless of thread scheduling.

use crate::abep::{EnergyPoint, FadeDistribution, PpmConfig};
use crate::error::{Error, Result};
use crate::pointing::{collected_fraction, equivalent_beam, EquivalentBeam, PointingGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Where the per-symbol collected fraction comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimSource {
    /// Gaussian boresight offsets pushed through the beam overlap model.
    Geometry(PointingGeometry),
    /// Draws from the analytic fade distribution.
    Fade(FadeDistribution),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub config: PpmConfig,
    pub point: EnergyPoint,
    pub source: SimSource,
    pub n_symbols: u64,
    pub seed: u64,
    /// Number of independent generator streams the symbols are split across.
    pub chunks: u32,
}

impl SimSpec {
    pub const DEFAULT_CHUNKS: u32 = 64;

    pub fn new(
        config: PpmConfig,
        point: EnergyPoint,
        source: SimSource,
        n_symbols: u64,
        seed: u64,
    ) -> Self {
        Self {
            config,
            point,
            source,
            n_symbols,
            seed,
            chunks: Self::DEFAULT_CHUNKS,
        }
    }

    pub fn with_chunks(self, chunks: u32) -> Self {
        Self { chunks, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub abep_estimate: f64,
    pub std_error: f64,
    pub n_symbols: u64,
    pub symbol_errors: u64,
}

impl SimResult {
    fn from_counts(config: &PpmConfig, n_symbols: u64, symbol_errors: u64) -> Self {
        let k = config.bit_factor();
        let p = symbol_errors as f64 / n_symbols as f64;
        Self {
            abep_estimate: k * p,
            std_error: k * (p * (1.0 - p) / n_symbols as f64).sqrt(),
            n_symbols,
            symbol_errors,
        }
    }
}

/// Generator for chunk `index` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn offset<R: Rng + ?Sized>(mean: f64, sd: f64, rng: &mut R) -> f64 {
    if sd == 0.0 {
        mean
    } else {
        Normal::new(mean, sd).expect("validated deviation").sample(rng)
    }
}

fn draw_fraction<R: Rng + ?Sized>(g: &PointingGeometry, beam: &EquivalentBeam, rng: &mut R) -> f64 {
    let x = offset(g.mu_x, g.sigma_x, rng);
    let y = offset(g.mu_y, g.sigma_y, rng);
    collected_fraction(x.hypot(y), beam)
}

/// One collected fraction from Gaussian boresight offsets.
pub fn sample_collected_fraction<R: Rng + ?Sized>(g: &PointingGeometry, rng: &mut R) -> Result<f64> {
    let beam = equivalent_beam(g)?;
    Ok(draw_fraction(g, &beam, rng))
}

/// Noise-only slot statistic, `Gamma(M, 1)`.
pub fn sample_noise_slot<R: Rng + ?Sized>(noise_modes: u32, rng: &mut R) -> f64 {
    Gamma::new(noise_modes as f64, 1.0)
        .expect("positive shape")
        .sample(rng)
}

/// Signal slot statistic with load `xi`: `Gamma(M + J, 1)`, `J ~ Poisson(xi)`.
pub fn sample_signal_slot<R: Rng + ?Sized>(noise_modes: u32, xi: f64, rng: &mut R) -> f64 {
    let extra = if xi > 0.0 {
        Poisson::new(xi).expect("positive mean").sample(rng)
    } else {
        0.0
    };
    Gamma::new(noise_modes as f64 + extra, 1.0)
        .expect("positive shape")
        .sample(rng)
}

enum FractionSampler {
    Fixed(f64),
    Power { a: f64, inv_phi2: f64 },
    Geometry(PointingGeometry, EquivalentBeam),
}

impl FractionSampler {
    fn new(source: &SimSource) -> Result<Self> {
        Ok(match source {
            SimSource::Fade(FadeDistribution::Deterministic { t0 }) => Self::Fixed(*t0),
            SimSource::Fade(FadeDistribution::Gamma(g)) => Self::Power {
                a: g.a,
                inv_phi2: 1.0 / g.phi2,
            },
            SimSource::Geometry(g) => Self::Geometry(*g, equivalent_beam(g)?),
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Fixed(t) => *t,
            // 1 − U lies in (0, 1] so t = 0 only through underflow
            Self::Power { a, inv_phi2 } => a * (1.0 - rng.random::<f64>()).powf(*inv_phi2),
            Self::Geometry(g, beam) => draw_fraction(g, beam, rng),
        }
    }
}

fn run_chunk(spec: &SimSpec, sampler: &FractionSampler, index: u64, symbols: u64) -> u64 {
    let mut rng = chunk_rng(spec.seed, index);
    let m = spec.config.noise_modes;
    let load = spec.point.ebn0 * spec.config.bits_per_symbol();
    let noise = Gamma::new(m as f64, 1.0).expect("positive shape");
    let mut errors = 0;
    for _ in 0..symbols {
        let t = sampler.sample(&mut rng);
        let signal = sample_signal_slot(m, t * load, &mut rng);
        let mut beaten = false;
        let mut ties = 0u32;
        for _ in 1..spec.config.order {
            let v = noise.sample(&mut rng);
            if v > signal {
                beaten = true;
            } else if v == signal {
                ties += 1;
            }
        }
        if beaten || (ties > 0 && rng.random_range(0..=ties) != 0) {
            errors += 1;
        }
    }
    errors
}

fn chunk_sizes(n: u64, chunks: u32) -> impl Iterator<Item = (u64, u64)> {
    let chunks = chunks.max(1) as u64;
    let base = n / chunks;
    let extra = n % chunks;
    (0..chunks).map(move |i| (i, base + u64::from(i < extra)))
}

/// Estimate the ABEP by direct simulation of `spec.n_symbols` symbols.
pub fn simulate_abep(spec: &SimSpec) -> Result<SimResult> {
    spec.config.validate()?;
    EnergyPoint::new(spec.point.ebn0)?;
    if spec.n_symbols == 0 {
        return Err(Error::domain("n_symbols must be >= 1"));
    }
    if spec.chunks == 0 {
        return Err(Error::domain("chunks must be >= 1"));
    }
    match &spec.source {
        SimSource::Fade(f) => f.validate()?,
        SimSource::Geometry(g) => g.validate()?,
    }
    let sampler = FractionSampler::new(&spec.source)?;
    let sizes: Vec<_> = chunk_sizes(spec.n_symbols, spec.chunks).collect();
    let errors: u64 = sizes
        .par_iter()
        .map(|&(i, n)| run_chunk(spec, &sampler, i, n))
        .sum();
    Ok(SimResult::from_counts(&spec.config, spec.n_symbols, errors))
}
