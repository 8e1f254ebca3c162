use ppm_pointing::optimizer::width_curve_points;
use ppm_pointing::{
    abep, fade_params, optimal_width_curve, optimize_width, EnergyPoint, Error, FadeDistribution,
    PointingGeometry, PpmConfig, WidthSearch,
};

fn cfg() -> PpmConfig {
    PpmConfig::new(16, 2).unwrap()
}

fn db(x: f64) -> EnergyPoint {
    EnergyPoint::from_db(x).unwrap()
}

fn abep_at(g: &PointingGeometry, w: f64, e: f64) -> f64 {
    abep(&cfg(), db(e), &fade_params(&g.with_width(w)).unwrap()).unwrap()
}

#[test]
fn static_optimum_maximizes_overlap() {
    let g = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 0.0, 0.0);
    // dense scan of the static collected fraction
    let best = (100..=6000)
        .map(|k| k as f64 * 0.01)
        .map(|w| match fade_params(&g.with_width(w)).unwrap() {
            FadeDistribution::Deterministic { t0 } => (w, t0),
            _ => unreachable!(),
        })
        .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    for &e in &[20.0, 30.0, 38.0] {
        let p = optimize_width(&cfg(), db(e), &g, &WidthSearch::default()).unwrap();
        assert!((p.w_opt - best.0).abs() <= 0.05 + 1e-9, "{e} dB: {} vs {}", p.w_opt, best.0);
    }
}

#[test]
fn fine_stage_matches_dense_scan() {
    let g = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 1.0, 1.0);
    let e = 36.0;
    let p = optimize_width(&cfg(), db(e), &g, &WidthSearch::default()).unwrap();
    let dense = (1500..=2500)
        .map(|k| k as f64 * 0.01)
        .map(|w| (w, abep_at(&g, w, e)))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    assert!((p.w_opt - dense.0).abs() <= 0.05 + 1e-9, "{} vs {}", p.w_opt, dense.0);
    assert!(p.abep_min <= abep_at(&g, p.w_coarse, e));
    assert!(p.abep_min >= dense.1);
}

#[test]
fn jitter_widens_the_beam_with_energy() {
    let g = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 1.0, 1.0);
    let grid: Vec<f64> = (0..=40).map(|k| k as f64).collect();
    let curve = optimal_width_curve(&cfg(), &grid, &g, &WidthSearch::default(), true).unwrap();
    for pair in curve.windows(2) {
        assert!(pair[1].w_opt >= pair[0].w_opt, "{:?}", pair);
    }
    assert!(curve.last().unwrap().w_opt > curve[0].w_opt + 5.0);
}

#[test]
fn warm_start_agrees_with_cold_start() {
    let g = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 2.0, 2.0);
    let grid: Vec<f64> = (0..=20).map(|k| 2.0 * k as f64).collect();
    let warm = optimal_width_curve(&cfg(), &grid, &g, &WidthSearch::default(), true).unwrap();
    let cold = optimal_width_curve(&cfg(), &grid, &g, &WidthSearch::default(), false).unwrap();
    assert_eq!(warm, cold);
}

#[test]
fn aligned_low_energy_optimum_is_at_the_edge() {
    let g = PointingGeometry::in_aperture_units(1.0, 0.0, 0.0, 1.0, 1.0);
    let r = optimize_width(&cfg(), db(5.0), &g, &WidthSearch::default());
    assert!(matches!(r, Err(Error::BracketEdge { w_edge, .. }) if w_edge == 1.0));
    let pts = width_curve_points(&cfg(), &[5.0, 20.0], &g, &WidthSearch::default(), true);
    assert!(pts[0].is_err());
    assert!(pts[1].as_ref().unwrap().w_opt > 1.0);
    assert!(optimal_width_curve(&cfg(), &[5.0, 20.0], &g, &WidthSearch::default(), true).is_err());
}

#[test]
fn empty_grid_is_rejected() {
    let g = PointingGeometry::in_aperture_units(1.0, 10.0, 0.0, 1.0, 1.0);
    assert!(optimal_width_curve(&cfg(), &[], &g, &WidthSearch::default(), true).is_err());
}
