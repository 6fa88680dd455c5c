//! How much P_QR moves when the Woods–Saxon absorber is rescaled or sharpened.
//!
//! cargo run --release --example absorber_independence

use qreflect::experiment::{
    absorber_independence_report, default_absorber_variants, k_perp, BeamSource,
};
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;
use qreflect::solver::Grid;

fn main() -> qreflect::Result<()> {
    let glass = Surface::preset("glass_slide")?;
    let variants = default_absorber_variants(AbsorberParams::default());
    for (t0, theta) in [(8.7, 0.3e-3), (8.7, 2e-3), (300.0, 0.5e-3), (300.0, 3e-3)] {
        let beam = BeamSource::new(t0)?;
        let r = absorber_independence_report(&glass, &beam, theta, &variants, Grid::default())?;
        println!(
            "T0 = {t0:>5} K  θ = {:.2} mrad  k_perp = {:.4} nm^-1  P = {:.4e}  spread = {:.2}%",
            theta * 1e3,
            k_perp(t0, theta)?,
            r.p_qr[0],
            100.0 * r.spread
        );
        for (w, p) in r.variants.iter().zip(&r.p_qr) {
            println!(
                "    A = {:>6.1} meV  α = {}  P = {p:.6e}",
                w.amplitude, w.alpha
            );
        }
    }
    Ok(())
}
