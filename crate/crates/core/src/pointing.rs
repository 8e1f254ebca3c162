//! Pointing-error geometry and the collected-fraction fade it induces.
//!
//! A Gaussian beam with `1/e²` intensity radius `w_z` hits a circular aperture
//! of radius `a` at radial offset `r`. The collected fraction is approximated
//! by `t(r) = A₀ exp(−2r²/w_zeq²)` with
//!
//! * `v = √(π/2)·a/w_z`
//! * `A₀ = erf(v)²`
//! * `w_zeq² = w_z² √π erf(v) / (2v e^{−v²})`
//!
//! Independent Gaussian offsets `x ~ N(μ_x, σ_x²)`, `y ~ N(μ_y, σ_y²)` make `r`
//! Beckmann distributed. Its law is replaced by a Rayleigh one of matched
//! spread `σ_mod`, which turns `t` into the power law `F_t(t) = (t/A)^{φ²}`.
//!
//! Lengths may be given in any unit; they are normalized by `a` internally.

use crate::abep::{FadeDistribution, GammaFade};
use crate::error::{Error, Result};
use crate::numerics::erf;
use serde::{Deserialize, Serialize};

/// Aperture radius, beam width, boresight offsets and jitter deviations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointingGeometry {
    pub a: f64,
    pub w_z: f64,
    pub mu_x: f64,
    pub mu_y: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
}

impl PointingGeometry {
    /// Geometry with all lengths in units of the aperture radius.
    pub fn in_aperture_units(w_z: f64, mu_x: f64, mu_y: f64, sigma_x: f64, sigma_y: f64) -> Self {
        Self {
            a: 1.0,
            w_z,
            mu_x,
            mu_y,
            sigma_x,
            sigma_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.w_z, self.mu_x, self.mu_y, self.sigma_x, self.sigma_y]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("geometry lengths must be finite"));
        }
        if !(self.a > 0.0) {
            return Err(Error::domain(format!("aperture radius must be positive, got {}", self.a)));
        }
        if !(self.w_z > 0.0) {
            return Err(Error::domain(format!("beam width must be positive, got {}", self.w_z)));
        }
        if self.sigma_x < 0.0 || self.sigma_y < 0.0 {
            return Err(Error::domain("jitter deviations must be >= 0"));
        }
        Ok(())
    }

    /// The same geometry expressed in units of `a` (so `a = 1`).
    pub fn normalized(&self) -> Self {
        let a = self.a;
        Self {
            a: 1.0,
            w_z: self.w_z / a,
            mu_x: self.mu_x / a,
            mu_y: self.mu_y / a,
            sigma_x: self.sigma_x / a,
            sigma_y: self.sigma_y / a,
        }
    }

    pub fn with_width(&self, w_z: f64) -> Self {
        Self { w_z, ..*self }
    }

    pub fn is_static(&self) -> bool {
        self.sigma_x == 0.0 && self.sigma_y == 0.0
    }
}

/// Intermediate quantities of the Gaussian-beam/aperture overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalentBeam {
    /// `√(π/2)·a/w_z`
    pub v: f64,
    /// Collected fraction at zero offset.
    pub a0: f64,
    /// Equivalent width, in the same unit as the geometry it came from.
    pub w_zeq: f64,
}

pub fn equivalent_beam(g: &PointingGeometry) -> Result<EquivalentBeam> {
    g.validate()?;
    let n = g.normalized();
    let v = (std::f64::consts::PI / 2.0).sqrt() / n.w_z;
    let e = erf(v);
    let a0 = e * e;
    // w_zeq/w_z = sqrt(√π erf(v) e^{v²} / (2v)); tends to 1 as v → 0
    let scale = if v < 1e-4 {
        (1.0 + 2.0 * v * v / 3.0).sqrt()
    } else {
        (0.5 * ((std::f64::consts::PI.sqrt() * e / (2.0 * v)).ln() + v * v)).exp()
    };
    Ok(EquivalentBeam {
        v,
        a0,
        w_zeq: g.w_z * scale,
    })
}

/// Fade parameters `(φ², A)`, or the deterministic fraction when there is no jitter.
pub fn fade_params(g: &PointingGeometry) -> Result<FadeDistribution> {
    let beam = equivalent_beam(g)?;
    let n = g.normalized();
    let w = beam.w_zeq / g.a;
    let w2 = w * w;
    let boresight = 2.0 * (n.mu_x * n.mu_x + n.mu_y * n.mu_y) / w2;
    if n.is_static() {
        return Ok(FadeDistribution::Deterministic {
            t0: beam.a0 * (-boresight).exp(),
        });
    }
    let (sx2, sy2) = (n.sigma_x * n.sigma_x, n.sigma_y * n.sigma_y);
    let sigma_mod6 = (3.0 * n.mu_x * n.mu_x * sx2 * sx2
        + 3.0 * n.mu_y * n.mu_y * sy2 * sy2
        + sx2 * sx2 * sx2
        + sy2 * sy2 * sy2)
        / 2.0;
    let sigma_mod2 = sigma_mod6.cbrt();
    let phi2 = w2 / (4.0 * sigma_mod2);
    // 1/φ² − 1/(2φ_x²) − 1/(2φ_y²) − μ_x²/(2σ_x²φ_x²) − μ_y²/(2σ_y²φ_y²), with
    // 1/(2φ_x²) = 2σ_x²/w² and μ_x²/(2σ_x²φ_x²) = 2μ_x²/w² (finite as σ_x → 0)
    let exponent = 4.0 * sigma_mod2 / w2 - 2.0 * (sx2 + sy2) / w2 - boresight;
    let mut a = beam.a0 * exponent.exp();
    if a > 1.0 {
        log::warn!("fade scale A = {a} exceeds 1 and is clamped");
        a = 1.0;
    }
    Ok(FadeDistribution::Gamma(GammaFade { phi2, a }))
}

/// Density of the collected fraction, `φ²/A^{φ²} t^{φ²−1}` on `[0, A]`.
pub fn pdf_t(fade: &GammaFade, t: f64) -> f64 {
    fade.pdf(t)
}

/// `A₀ exp(−2r²/w_zeq²)` for radial offset `r` (same unit as `w_zeq`).
pub fn collected_fraction(r: f64, beam: &EquivalentBeam) -> f64 {
    beam.a0 * (-2.0 * r * r / (beam.w_zeq * beam.w_zeq)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(w_z: f64, mu_x: f64, sigma: f64) -> PointingGeometry {
        PointingGeometry::in_aperture_units(w_z, mu_x, 0.0, sigma, sigma)
    }

    #[test]
    fn wide_beam_limit() {
        let b = equivalent_beam(&geom(1e3, 0.0, 0.0)).unwrap();
        assert!((b.a0 / 2e-6 - 1.0).abs() < 1e-3);
        assert!((b.w_zeq / 1e3 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn narrow_beam_saturates() {
        let b = equivalent_beam(&geom(0.1, 0.0, 0.0)).unwrap();
        assert!((b.a0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_width() {
        let b = equivalent_beam(&geom(1.0, 0.0, 0.0)).unwrap();
        assert!((b.v - 1.253_314_137_315_500_3).abs() < 1e-15);
        assert!((b.a0 - 0.853).abs() < 1e-3);
        assert!(b.w_zeq >= 1.0);
    }

    #[test]
    fn aligned_static_beam() {
        let g = geom(15.0, 0.0, 0.0);
        let b = equivalent_beam(&g).unwrap();
        assert_eq!(fade_params(&g).unwrap(), FadeDistribution::Deterministic { t0: b.a0 });
    }

    #[test]
    fn static_offset() {
        let g = geom(15.0, 10.0, 0.0);
        let b = equivalent_beam(&g).unwrap();
        let FadeDistribution::Deterministic { t0 } = fade_params(&g).unwrap() else {
            panic!("expected deterministic fade");
        };
        assert!((t0 - b.a0 * (-200.0 / (b.w_zeq * b.w_zeq)).exp()).abs() < 1e-18);
    }

    #[test]
    fn symmetric_jitter_without_boresight() {
        let g = geom(15.0, 0.0, 1.3);
        let b = equivalent_beam(&g).unwrap();
        let FadeDistribution::Gamma(f) = fade_params(&g).unwrap() else {
            panic!("expected gamma fade");
        };
        let phi = b.w_zeq / (2.0 * 1.3);
        assert!((f.phi2 / (phi * phi) - 1.0).abs() < 1e-14);
        assert!((f.a / b.a0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_sided_jitter_is_gamma() {
        let g = PointingGeometry::in_aperture_units(15.0, 10.0, 0.0, 0.0, 1.0);
        assert!(matches!(fade_params(&g).unwrap(), FadeDistribution::Gamma(_)));
    }

    #[test]
    fn collected_fraction_examples() {
        let b = equivalent_beam(&geom(15.0, 0.0, 0.0)).unwrap();
        assert_eq!(collected_fraction(0.0, &b), b.a0);
        let r = b.w_zeq / 2f64.sqrt();
        assert!((collected_fraction(r, &b) - b.a0 * (-1f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn invalid_geometry() {
        assert!(equivalent_beam(&geom(0.0, 0.0, 0.0)).is_err());
        assert!(fade_params(&geom(15.0, 0.0, -1.0)).is_err());
        let mut g = geom(15.0, 0.0, 0.0);
        g.a = 0.0;
        assert!(fade_params(&g).is_err());
    }
}
