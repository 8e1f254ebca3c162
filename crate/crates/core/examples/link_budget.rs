//! From received optical energy through the pre-amplifier to error probability.

use ppm_pointing::{abep, ebn0_from_link, fade_params, AmplifierModel, PointingGeometry, PpmConfig};

fn main() -> ppm_pointing::Result<()> {
    let photon_energy = 6.626_070_15e-34 * 299_792_458.0 / 1550e-9;
    let amp = AmplifierModel { gain: 1000.0, n_sp: 1.4, photon_energy };
    let config = PpmConfig::new(16, 2)?;
    let fade = fade_params(&PointingGeometry::in_aperture_units(15.0, 10.0, 0.0, 1.0, 1.0))?;
    for photons in [100.0, 1e3, 1e4, 1e5] {
        let point = ebn0_from_link(&amp, photons * photon_energy)?;
        println!("{photons:>8} photons/bit  Eb/N0 {:>6.2} dB  ABEP {:.4e}", point.db(), abep(&config, point, &fade)?);
    }
    Ok(())
}
