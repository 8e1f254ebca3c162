//! Fade-averaged Poisson weights `w(n) = E_t[(z t)^n e^{-z t} / n!]`.

use super::{FadeDistribution, GammaFade};
use crate::error::{Error, Result};
use crate::numerics::{ln_lower_gamma_scaled, ln_power_factor};

fn check_scale(a: f64) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("fade scale A must lie in (0, 1], got {a}")));
    }
    Ok(())
}

fn check_load(z: f64) -> Result<()> {
    if !(z >= 0.0) || z.is_infinite() {
        return Err(Error::domain(format!("signal load z must be finite and >= 0, got {z}")));
    }
    Ok(())
}

/// `ln w(n)` for a fixed collected fraction `a`: `ln((a z)^n e^{-a z}/n!)`.
pub fn ln_weight_poisson(n: u32, a: f64, z: f64) -> Result<f64> {
    check_scale(a)?;
    check_load(z)?;
    Ok(ln_power_factor(n as f64, a * z))
}

/// Weight for a deterministic collected fraction `a` (static misalignment).
pub fn weight_poisson(n: u32, a: f64, z: f64) -> Result<f64> {
    Ok(ln_weight_poisson(n, a, z)?.exp())
}

/// `ln w(n)` under the power-law fade `f_t(t) = φ²/A^{φ²} t^{φ²−1}`.
///
/// `w(n) = φ² γ(n+φ², x) / (x^{φ²} n!)` with `x = A z`, evaluated as
/// `ln φ² + ln(x^n e^{-x}/n!) + ln(γ(n+φ², x) x^{-(n+φ²)} e^{x})` so the large
/// powers of `x` cancel analytically rather than numerically.
pub fn ln_weight_gamma(n: u32, fade: &GammaFade, z: f64) -> Result<f64> {
    fade.validate()?;
    check_load(z)?;
    let x = fade.a * z;
    if x == 0.0 {
        return Ok(if n == 0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let s = n as f64 + fade.phi2;
    Ok(fade.phi2.ln() + ln_power_factor(n as f64, x) + ln_lower_gamma_scaled(s, x)?)
}

pub fn weight_gamma(n: u32, fade: &GammaFade, z: f64) -> Result<f64> {
    Ok(ln_weight_gamma(n, fade, z)?.exp())
}

/// `ln w(n)` for either fade kind (a zero deterministic fraction is the
/// zero-signal limit).
pub fn ln_weight(n: u32, fade: &FadeDistribution, z: f64) -> Result<f64> {
    match fade {
        FadeDistribution::Gamma(g) => ln_weight_gamma(n, g, z),
        FadeDistribution::Deterministic { t0 } if *t0 == 0.0 => {
            check_load(z)?;
            Ok(if n == 0 { 0.0 } else { f64::NEG_INFINITY })
        }
        FadeDistribution::Deterministic { t0 } => ln_weight_poisson(n, *t0, z),
    }
}
