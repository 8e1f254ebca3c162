//! Error probability against energy for a fixed beam, with and without jitter.

use ppm_pointing::{abep, fade_params, EnergyPoint, PointingGeometry, PpmConfig};

fn main() -> ppm_pointing::Result<()> {
    let config = PpmConfig::new(16, 2)?;
    let fixed = fade_params(&PointingGeometry::in_aperture_units(15.0, 10.0, 0.0, 0.0, 0.0))?;
    let jitter = fade_params(&PointingGeometry::in_aperture_units(15.0, 10.0, 0.0, 1.0, 1.0))?;
    println!("{:>8} {:>14} {:>14}", "Eb/N0 dB", "static", "sigma = a");
    for k in 0..=10 {
        let point = EnergyPoint::from_db(5.0 * k as f64)?;
        println!("{:>8} {:>14.6e} {:>14.6e}", point.db(), abep(&config, point, &fixed)?, abep(&config, point, &jitter)?);
    }
    Ok(())
}
