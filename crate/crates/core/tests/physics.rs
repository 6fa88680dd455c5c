use qreflect::experiment::{
    angle_grid, run_scan, solve_point, wavevector_from_temperature, BeamSource,
};
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;
use qreflect::solver::Grid;

fn p_at(surface: &str, t0: f64, k_perp_nm: f64) -> f64 {
    let s = Surface::preset(surface).unwrap();
    let beam = BeamSource::new(t0).unwrap();
    let theta = (k_perp_nm / wavevector_from_temperature(t0).unwrap()).asin();
    solve_point(&s, &beam, theta, AbsorberParams::default(), Grid::default())
        .unwrap()
        .p_qr
}

#[test]
fn reflection_follows_threshold_law_and_vanishes_far_above() {
    let slope = |k: f64| (1.0 - p_at("glass_slide", 300.0, k)) / k;
    let (s1, s2) = (slope(0.0001), slope(0.0002));
    assert!(p_at("glass_slide", 300.0, 0.0001) > 0.99);
    assert!((s1 - s2).abs() < 0.05 * s1, "{s1} vs {s2}");
    assert!(p_at("glass_slide", 300.0, 2.0) < 1e-3);
}

#[test]
fn stronger_van_der_waals_reflects_less() {
    let glass = p_at("glass_slide", 50.0, 0.02);
    let gaas = p_at("gaas_wafer", 50.0, 0.02);
    assert!(gaas < glass, "{gaas} vs {glass}");
}

#[test]
fn scan_is_independent_of_thread_count() {
    let s = Surface::preset("glass_slide").unwrap();
    let beam = BeamSource::new(8.7).unwrap();
    let angles = angle_grid(0.2e-3, 20e-3, 12, true);
    let a = run_scan(&s, &beam, &angles, AbsorberParams::default()).unwrap();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let b = serial
        .install(|| run_scan(&s, &beam, &angles, AbsorberParams::default()))
        .unwrap();
    assert_eq!(a, b);
}
