//! Beam wave vectors, the k_perp axis and Bragg angles on the 20 µm grating.
//!
//! cargo run --release --example beam_kinematics

use qreflect::channels::{bragg_angle, ScatteringConditions};
use qreflect::experiment::{k_perp, wavevector_from_temperature, BeamSource};
use qreflect::presets::Surface;

fn main() -> qreflect::Result<()> {
    println!("{:>8} {:>10} {:>12}", "T0 (K)", "E (meV)", "k (nm^-1)");
    for t0 in [8.7, 50.0, 300.0] {
        let beam = BeamSource::new(t0)?;
        println!(
            "{t0:>8} {:>10.3} {:>12.3}",
            beam.energy(),
            wavevector_from_temperature(t0)?
        );
    }

    println!("\nk_perp (nm^-1) against grazing angle");
    println!(
        "{:>10} {:>10} {:>10} {:>10}",
        "θ (mrad)", "8.7 K", "50 K", "300 K"
    );
    for theta in [0.1e-3, 0.5e-3, 1e-3, 2.68e-3, 5e-3, 10e-3, 25e-3] {
        let row: Vec<String> = [8.7, 50.0, 300.0]
            .iter()
            .map(|&t| format!("{:>10.4}", k_perp(t, theta).unwrap()))
            .collect();
        println!("{:>10.2} {}", theta * 1e3, row.join(" "));
    }

    let cr = Surface::preset("structured_cr")?;
    let beam = BeamSource::new(8.7)?;
    let c = ScatteringConditions::from_grazing(beam.k_i, 5e-3, cr.period())?;
    println!("\nstructured_cr, 8.7 K, θ = 5 mrad: exit angles by experimental order");
    for n in -3..=3 {
        match bragg_angle(n, &c) {
            Ok(th) => println!("  {n:+}: {:.4} mrad", th * 1e3),
            Err(e) => println!("  {n:+}: {e}"),
        }
    }
    Ok(())
}
