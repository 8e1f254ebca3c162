//! Equivalent beam and fade parameters across beam widths.

use ppm_pointing::{equivalent_beam, fade_params, FadeDistribution, PointingGeometry};

fn main() -> ppm_pointing::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>12} {:>12}", "w_z/a", "A0", "w_zeq/a", "phi2", "A");
    for w in [5.0, 10.0, 15.0, 20.0, 25.0, 40.0] {
        let g = PointingGeometry::in_aperture_units(w, 10.0, 0.0, 1.0, 1.0);
        let beam = equivalent_beam(&g)?;
        match fade_params(&g)? {
            FadeDistribution::Gamma(f) => {
                println!("{w:>6} {:>10.6} {:>10.4} {:>12.5} {:>12.4e}", beam.a0, beam.w_zeq, f.phi2, f.a)
            }
            FadeDistribution::Deterministic { t0 } => println!("{w:>6} {:>10.6} {:>10.4} {:>12} {t0:>12.4e}", beam.a0, beam.w_zeq, "-"),
        }
    }
    Ok(())
}
