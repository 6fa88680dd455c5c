//! Diffraction from the structured Cr grating at one incidence condition.
//! Orders are printed in the experimental labelling.
//!
//! cargo run --release --example grating_diffraction -- [T0_K] [theta_mrad]

use qreflect::channels::{build_channel_set, theory_to_experiment_order, ScatteringConditions};
use qreflect::experiment::BeamSource;
use qreflect::potential::AbsorberParams;
use qreflect::presets::Surface;
use qreflect::solver::{diffraction_efficiencies, solve, CoupledChannelProblem, Grid};

fn main() -> qreflect::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let t0 = args.next().unwrap_or(8.7);
    let theta = args.next().unwrap_or(2.0) * 1e-3;

    let cr = Surface::preset("structured_cr")?;
    let beam = BeamSource::new(t0)?;
    let c = ScatteringConditions::from_grazing(beam.k_i, theta, cr.period())?;
    let channels = build_channel_set(&c, cr.n_max());
    println!(
        "{} channels, {} open",
        channels.len(),
        channels.open_positions().len()
    );

    let problem = CoupledChannelProblem::new(
        channels,
        cr.potential,
        cr.grating.as_ref(),
        AbsorberParams::default(),
        Grid::default(),
    )?;
    let sol = solve(&problem)?;
    let eff = diffraction_efficiencies(&sol)?;
    println!("P_QR = {:.6e}", sol.p_qr);
    println!("{:>6} {:>14} {:>12}", "order", "intensity", "efficiency");
    let mut rows: Vec<(i32, f64, f64)> = sol
        .open_indices
        .iter()
        .zip(sol.intensities.iter().zip(&eff))
        .map(|(&n, (&i, &e))| (theory_to_experiment_order(n), i, e))
        .collect();
    rows.sort_by_key(|r| r.0);
    for (n, i, e) in rows {
        println!("{n:>+6} {i:>14.6e} {e:>12.5}");
    }
    Ok(())
}
