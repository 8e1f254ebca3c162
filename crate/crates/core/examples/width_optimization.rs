//! Optimal beam width against energy under jitter, with warm start.

use ppm_pointing::{optimal_width_curve, PointingGeometry, PpmConfig, WidthSearch};

fn main() -> ppm_pointing::Result<()> {
    let config = PpmConfig::new(16, 2)?;
    let template = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 1.0, 1.0);
    let grid: Vec<f64> = (0..=8).map(|k| 5.0 * k as f64).collect();
    let curve = optimal_width_curve(&config, &grid, &template, &WidthSearch::default(), true)?;
    println!("{:>8} {:>8} {:>14}", "Eb/N0 dB", "w_opt/a", "ABEP");
    for p in curve {
        println!("{:>8} {:>8} {:>14.6e}", p.ebn0_db, p.w_opt, p.abep_min);
    }
    Ok(())
}
