//! Runs a scan described by a TOML configuration and prints the resolved file.
//!
//! cargo run --release --example run_config -- [config.toml]

use std::path::Path;

use qreflect::config::RunConfig;
use qreflect::experiment::{run_scan_with, BeamSource};
use qreflect::output::write_scan_csv;

fn main() -> qreflect::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(p) => RunConfig::load(Path::new(&p))?,
        None => RunConfig::from_toml_str("temperatures = [50.0]\nangles = \"0.5:10:5log\"\n")?,
    };
    cfg.validate()?;
    print!("{}", cfg.to_toml_string()?);
    let surface = cfg.surface()?;
    for &t0 in &cfg.temperatures {
        let scan = run_scan_with(
            &surface,
            &BeamSource::new(t0)?,
            &cfg.angles.angles(),
            cfg.absorber,
            cfg.grid,
        )?;
        println!("\n# {} at {t0} K", surface.name);
        write_scan_csv(&scan, std::io::stdout().lock())?;
    }
    Ok(())
}
