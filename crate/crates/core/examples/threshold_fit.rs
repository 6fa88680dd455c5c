//! Linear threshold law P ≈ 1 - 2 b k_perp fitted to the glass-slide curve.
//!
//! cargo run --release --example threshold_fit

use qreflect::experiment::{angle_grid, run_scan, threshold_fit, BeamSource};
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;

fn main() -> qreflect::Result<()> {
    let glass = Surface::preset("glass_slide")?;
    let beam = BeamSource::new(8.7)?;
    let scan = run_scan(
        &glass,
        &beam,
        &angle_grid(0.01e-3, 25e-3, 80, true),
        AbsorberParams::default(),
    )?;
    println!(
        "{:>12} {:>7} {:>10} {:>9} {:>8} {:>12}",
        "cutoff", "points", "intercept", "b (nm)", "R^2", "residual"
    );
    for cutoff in [0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3] {
        match threshold_fit(&scan, cutoff) {
            Ok(f) => println!(
                "{cutoff:>12} {:>7} {:>10.4} {:>9.3} {:>8.4} {:>12.3e}",
                f.n_points, f.intercept, f.b, f.r_squared, f.residual_norm
            ),
            Err(e) => println!("{cutoff:>12} {e}"),
        }
    }
    Ok(())
}
