//! Analytic average bit-error probability of the pre-amplified PPM receiver.
//!
//! The receiver integrates each of the `Q` slots of a symbol and picks the
//! largest (soft decision). With `M` amplifier noise modes a noise slot is a
//! `Gamma(M, 1)` variable and the signal slot adds a Poisson number of unit
//! quanta with mean `t·ξ`, where `t` is the collected fraction. Inclusion–
//! exclusion over the `Q−1` competitors gives
//!
//! ```text
//! ABEP = Q/(2(Q−1)) Σ_q C(Q−1,q)(−1)^{q+1} Σ_n Σ_{i≥n} C(i+M−1,n+M−1) c_i^q/(1+q)^{i+M} · w(n)/q^n
//! ```
//!
//! with `z_q = q/(1+q)·(E_b/N₀)·log₂Q` and `w(n)` the fade-averaged Poisson
//! weight at load `z_q`. The `c_i^q` are `i!` times the coefficients of
//! `(Σ_{k<M} y^k/k!)^q`; see [`coeff`].
//!
//! For fixed `q` every `(n, i)` term is non-negative. The `i` sums depend on
//! `(M, q)` alone and are cached in extended precision; the `n` sum is
//! accumulated in the log domain. Only the short outer `q` sum alternates, and
//! it is accumulated in double-double.

pub mod coeff;
mod weights;

pub use coeff::{coeff_table, CoeffTable};
pub use weights::{
    ln_weight, ln_weight_gamma, ln_weight_poisson, weight_gamma, weight_poisson,
};

use crate::error::{Error, Result};
use crate::numerics::{binomial_f64, CompensatedSum};
use serde::{Deserialize, Serialize};

/// PPM modulation order `Q` and optical noise mode count `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpmConfig {
    pub order: u32,
    pub noise_modes: u32,
}

impl PpmConfig {
    pub fn new(order: u32, noise_modes: u32) -> Result<Self> {
        let c = Self { order, noise_modes };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 || !self.order.is_power_of_two() {
            return Err(Error::domain(format!(
                "PPM order must be a power of two >= 2, got {}",
                self.order
            )));
        }
        if self.noise_modes == 0 {
            return Err(Error::domain("noise mode count must be >= 1"));
        }
        Ok(())
    }

    pub fn bits_per_symbol(&self) -> f64 {
        self.order.trailing_zeros() as f64
    }

    /// Symbol-to-bit error factor `Q / (2(Q−1))`.
    pub fn bit_factor(&self) -> f64 {
        let q = self.order as f64;
        q / (2.0 * (q - 1.0))
    }
}

/// Energy per bit over noise spectral density, linear.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub ebn0: f64,
}

impl EnergyPoint {
    pub fn new(ebn0: f64) -> Result<Self> {
        if !(ebn0 >= 0.0) || ebn0.is_infinite() {
            return Err(Error::domain(format!("E_b/N0 must be finite and >= 0, got {ebn0}")));
        }
        Ok(Self { ebn0 })
    }

    /// From decibels; `-inf` dB maps to zero energy.
    pub fn from_db(db: f64) -> Result<Self> {
        if db.is_nan() || db == f64::INFINITY {
            return Err(Error::domain(format!("invalid E_b/N0 in dB: {db}")));
        }
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn db(&self) -> f64 {
        10.0 * self.ebn0.log10()
    }
}

/// Optical pre-amplifier: gain, spontaneous emission factor, photon energy (J).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierModel {
    pub gain: f64,
    pub n_sp: f64,
    pub photon_energy: f64,
}

impl AmplifierModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain > 1.0) || self.gain.is_infinite() {
            return Err(Error::domain(format!("amplifier gain must exceed 1, got {}", self.gain)));
        }
        if !(self.n_sp >= 1.0) {
            return Err(Error::domain(format!("n_sp must be >= 1, got {}", self.n_sp)));
        }
        if !(self.photon_energy > 0.0) {
            return Err(Error::domain("photon energy must be positive"));
        }
        Ok(())
    }

    /// Noise spectral density `N₀ = n_sp·hf·(G−1)`.
    pub fn noise_density(&self) -> f64 {
        self.n_sp * self.photon_energy * (self.gain - 1.0)
    }
}

/// `E_b/N₀` for beam energy `e_in` (J per bit) at the receiver: `G·E_in / N₀`.
pub fn ebn0_from_link(amp: &AmplifierModel, e_in: f64) -> Result<EnergyPoint> {
    amp.validate()?;
    if !(e_in >= 0.0) {
        return Err(Error::domain(format!("received energy must be >= 0, got {e_in}")));
    }
    EnergyPoint::new(amp.gain * e_in / amp.noise_density())
}

/// Power-law fade `f_t(t) = φ²/A^{φ²} t^{φ²−1}` on `[0, A]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaFade {
    pub phi2: f64,
    pub a: f64,
}

impl GammaFade {
    pub fn validate(&self) -> Result<()> {
        if !(self.phi2 > 0.0) || self.phi2.is_infinite() {
            return Err(Error::domain(format!("phi^2 must be positive, got {}", self.phi2)));
        }
        if !(self.a > 0.0 && self.a <= 1.0) {
            return Err(Error::domain(format!("fade scale A must lie in (0, 1], got {}", self.a)));
        }
        Ok(())
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if !(0.0..=self.a).contains(&t) {
            return 0.0;
        }
        if t == 0.0 {
            return match self.phi2.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => 1.0 / self.a,
                _ => 0.0,
            };
        }
        (self.phi2.ln() + (self.phi2 - 1.0) * t.ln() - self.phi2 * self.a.ln()).exp()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= self.a {
            1.0
        } else {
            (self.phi2 * (t / self.a).ln()).exp()
        }
    }

    /// `E[t] = A φ²/(φ²+1)`.
    pub fn mean(&self) -> f64 {
        self.a * self.phi2 / (self.phi2 + 1.0)
    }

    /// Inverse CDF `t = A·u^{1/φ²}`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.a * u.powf(1.0 / self.phi2)
    }
}

/// Distribution of the collected energy fraction `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FadeDistribution {
    Gamma(GammaFade),
    Deterministic { t0: f64 },
}

impl FadeDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            FadeDistribution::Gamma(g) => g.validate(),
            FadeDistribution::Deterministic { t0 } => {
                if !(0.0..=1.0).contains(t0) {
                    return Err(Error::domain(format!("collected fraction t0 must lie in [0, 1], got {t0}")));
                }
                Ok(())
            }
        }
    }
}

/// `z_q = q/(1+q) · (E_b/N₀) · log₂Q`.
pub fn compute_zq(q: u32, point: EnergyPoint, order: u32) -> Result<f64> {
    if q == 0 || q >= order {
        return Err(Error::domain(format!("q must lie in 1..={}, got {q}", order.saturating_sub(1))));
    }
    let qf = q as f64;
    Ok(qf / (1.0 + qf) * point.ebn0 * order.trailing_zeros() as f64)
}

/// Alternating-sum bookkeeping of one ABEP evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct AbepBreakdown {
    /// `C(Q−1,q)(−1)^{q+1} S_q` for `q = 1..Q−1` (before the bit factor).
    pub outer_terms: Vec<f64>,
    /// Bit error probability, unclamped.
    pub value: f64,
}

impl AbepBreakdown {
    fn max_term(&self) -> f64 {
        self.outer_terms.iter().fold(0.0f64, |m, t| m.max(t.abs()))
    }

    /// True when the outer sum cancelled below `1e-3 ×` its largest term and
    /// below `1e-14` absolute, or came out negative.
    pub fn cancellation_alarm(&self, bit_factor: f64) -> bool {
        let total = self.value / bit_factor;
        let max = self.max_term();
        if max == 0.0 {
            return false;
        }
        total < 0.0 || (total < 1e-3 * max && self.value < 1e-14)
    }
}

/// `S_q = Σ_n B_n w(n) q^{-n}` for one outer index.
fn partial_sum(
    config: &PpmConfig,
    point: EnergyPoint,
    fade: &FadeDistribution,
    q: u32,
) -> Result<f64> {
    let terms = coeff::series_terms(config.noise_modes, q)?;
    let z = compute_zq(q, point, config.order)?;
    let ln_q = (q as f64).ln();
    let mut logs = Vec::with_capacity(terms.inner.len());
    let mut max = f64::NEG_INFINITY;
    for (n, b) in terms.inner.iter().enumerate() {
        let lw = ln_weight(n as u32, fade, z)?;
        if lw == f64::NEG_INFINITY {
            logs.push((f64::NEG_INFINITY, 0.0));
            continue;
        }
        // keep B_n's significand out of the logarithm
        let l = lw - n as f64 * ln_q + b.exponent as f64 * std::f64::consts::LN_2;
        max = max.max(l + b.mantissa.ln());
        logs.push((l, b.mantissa));
    }
    if max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let sum: CompensatedSum = logs
        .iter()
        .filter(|(l, _)| *l > f64::NEG_INFINITY)
        .map(|&(l, m)| m * (l - max).exp())
        .collect();
    Ok(sum.value() * max.exp())
}

/// Evaluate the series and return the individual outer terms.
pub fn abep_breakdown(
    config: &PpmConfig,
    point: EnergyPoint,
    fade: &FadeDistribution,
) -> Result<AbepBreakdown> {
    config.validate()?;
    EnergyPoint::new(point.ebn0)?;
    fade.validate()?;
    if let FadeDistribution::Deterministic { t0 } = fade {
        if *t0 == 0.0 {
            return Ok(AbepBreakdown {
                outer_terms: Vec::new(),
                value: 0.5,
            });
        }
    }
    let big_q = config.order;
    let mut outer_terms = Vec::with_capacity(big_q as usize - 1);
    let mut acc = CompensatedSum::new();
    for q in 1..big_q {
        let s_q = partial_sum(config, point, fade, q)?;
        let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * binomial_f64((big_q - 1) as u64, q as u64)? * s_q;
        outer_terms.push(term);
        acc.add(term);
    }
    Ok(AbepBreakdown {
        outer_terms,
        value: config.bit_factor() * acc.value(),
    })
}

/// Average bit-error probability, in `[0, 0.5]`.
///
/// Returns [`Error::Cancellation`] rather than a value when the alternating
/// sum cannot be trusted.
pub fn abep(config: &PpmConfig, point: EnergyPoint, fade: &FadeDistribution) -> Result<f64> {
    let b = abep_breakdown(config, point, fade)?;
    if b.cancellation_alarm(config.bit_factor()) {
        return Err(Error::Cancellation {
            value: b.value,
            max_term: b.max_term(),
        });
    }
    Ok(b.value.clamp(0.0, 0.5))
}
