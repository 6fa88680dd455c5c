//! Morse/Casimir matching for every built-in surface, plus a coarse V(z) table.
//!
//! cargo run --release --example matching

use qreflect::presets::{preset_names, Surface};

fn main() -> qreflect::Result<()> {
    println!(
        "{:<14} {:>10} {:>10} {:>12}",
        "surface", "D (meV)", "z_bar (Å)", "C3 (meV Å^3)"
    );
    for name in preset_names() {
        let s = Surface::preset(&name)?;
        let p = s.potential;
        println!(
            "{:<14} {:>10.4} {:>10.4} {:>12.3}",
            name, p.d_well, p.z_bar, p.c3
        );
    }

    let glass = Surface::preset("glass_slide")?.potential;
    let (dv, dd) = glass.matching_residuals();
    println!("\nglass_slide matching residuals: ΔV = {dv:.1e} meV, ΔV' = {dd:.1e} meV/Å");
    println!("\n{:>8} {:>14}", "z (Å)", "V (meV)");
    for z in [
        -1.0,
        0.0,
        2.0,
        4.0,
        glass.z_bar,
        10.0,
        30.0,
        100.0,
        300.0,
        1000.0,
    ] {
        println!("{z:>8.2} {:>14.6e}", glass.value(z));
    }
    Ok(())
}
