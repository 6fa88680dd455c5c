//! σ between a computed scan and a measured curve.
//!
//! With a CSV argument (`k_perp_nm_inv,probability`) the file is used as the
//! measurement; otherwise a few illustrative points are compared.
//!
//! cargo run --release --example sigma_fit -- [measured.csv]

use std::path::Path;

use qreflect::experiment::{
    default_angles, match_curves, run_scan, sigma_metric, BeamSource, ExperimentalCurve,
};
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;

fn main() -> qreflect::Result<()> {
    let measured = match std::env::args().nth(1) {
        Some(p) => ExperimentalCurve::from_csv(Path::new(&p))?,
        None => ExperimentalCurve::new(
            "illustrative",
            vec![
                (0.005, 0.80),
                (0.01, 0.66),
                (0.02, 0.45),
                (0.05, 0.17),
                (0.1, 0.04),
            ],
        )?,
    };
    let glass = Surface::preset("glass_slide")?;
    let scan = run_scan(
        &glass,
        &BeamSource::new(8.7)?,
        &default_angles(),
        AbsorberParams::default(),
    )?;
    let theory = ExperimentalCurve::from_scan(&scan)?;
    println!("{:>12} {:>10} {:>10}", "k_perp", "P_exp", "P_theo");
    for m in match_curves(&measured, &theory)? {
        println!("{:>12.4} {:>10.4} {:>10.4}", m.k_perp, m.p_exp, m.p_theo);
    }
    println!("σ = {:.4}", sigma_metric(&measured, &scan)?);
    Ok(())
}
