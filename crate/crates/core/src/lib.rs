//! Bit-error analysis of optically pre-amplified PPM links under pointing errors.
//!
//! The crate computes the average bit-error probability (ABEP) of a
//! soft-decision `Q`-ary PPM receiver whose signal is faded by beam
//! misalignment, derives the fade law from the link geometry, searches for
//! the beam width that minimizes the ABEP, and checks everything against a
//! symbol-level Monte Carlo model.
//!
//! ```
//! use ppm_pointing::{abep, EnergyPoint, FadeDistribution, PpmConfig};
//!
//! let cfg = PpmConfig::new(2, 1).unwrap();
//! let p = abep(&cfg, EnergyPoint::new(2.0).unwrap(), &FadeDistribution::Deterministic { t0: 1.0 }).unwrap();
//! assert!((p - 0.5 * (-1f64).exp()).abs() < 1e-15);
//! ```

pub mod abep;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod optimizer;
pub mod pointing;

pub use abep::{
    abep, abep_breakdown, ebn0_from_link, AmplifierModel, EnergyPoint, FadeDistribution, GammaFade,
    PpmConfig,
};
pub use error::{Error, Result};
pub use montecarlo::{simulate_abep, SimResult, SimSource, SimSpec};
pub use optimizer::{optimal_width_curve, optimize_width, OptimumPoint, WidthSearch};
pub use pointing::{equivalent_beam, fade_params, EquivalentBeam, PointingGeometry};
