//! Monte Carlo estimate against the analytic value for a jittered beam.

use ppm_pointing::{abep, fade_params, simulate_abep, EnergyPoint, PointingGeometry, PpmConfig, SimSource, SimSpec};

fn main() -> ppm_pointing::Result<()> {
    let config = PpmConfig::new(4, 2)?;
    let geometry = PointingGeometry::in_aperture_units(15.0, 10.0, 0.0, 1.0, 1.0);
    let fade = fade_params(&geometry)?;
    for db in [25.0, 30.0, 35.0] {
        let point = EnergyPoint::from_db(db)?;
        let analytic = abep(&config, point, &fade)?;
        let fitted = simulate_abep(&SimSpec::new(config, point, SimSource::Fade(fade), 2_000_000, 7))?;
        let raw = simulate_abep(&SimSpec::new(config, point, SimSource::Geometry(geometry), 2_000_000, 7))?;
        println!(
            "{db} dB  analytic {analytic:.4e}  fitted fade {:.4e} ± {:.1e}  raw geometry {:.4e} ± {:.1e}",
            fitted.abep_estimate, fitted.std_error, raw.abep_estimate, raw.std_error
        );
    }
    Ok(())
}
