//! Quantum reflection from the glass slide at the three beam temperatures.
//! Writes one CSV per temperature into the directory given as the first
//! argument (default: the system temp dir).
//!
//! cargo run --release --example flat_scan -- out/

use std::path::PathBuf;

use qreflect::experiment::{default_angles, run_scan, BeamSource};
use qreflect::output::save_scan;
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;

fn main() -> qreflect::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let glass = Surface::preset("glass_slide")?;
    for t0 in [8.7, 50.0, 300.0] {
        let beam = BeamSource::new(t0)?;
        let scan = run_scan(&glass, &beam, &default_angles(), AbsorberParams::default())?;
        let path = save_scan(&dir, &scan)?;
        println!("{t0} K -> {}", path.display());
        for p in scan.points.iter().step_by(10) {
            println!(
                "  θ = {:>7.3} mrad  k_perp = {:.4} nm^-1  P = {:.4e}",
                p.theta_grazing * 1e3,
                p.k_perp,
                p.p_qr
            );
        }
    }
    Ok(())
}
