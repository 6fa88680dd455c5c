use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qreflect::config::{AngleSpec, RunConfig, SurfaceChoice};
use qreflect::experiment::{
    absorber_independence_report, default_absorber_variants, match_curves, run_scan_with,
    sigma_between, solve_point, BeamSource, ExperimentalCurve,
};
use qreflect::output::{load_theory_curve, save_scan};
use qreflect::potential::AbsorberParams;
use qreflect::solver::Grid;
use qreflect::Error;

#[derive(Parser)]
#[command(
    name = "qreflect",
    version,
    about = "Quantum threshold reflection of He atoms from surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute P_QR and diffraction intensities over an angle grid.
    Scan(RunArgs),
    /// Run the unitarity, absorber-independence and convergence gates.
    Verify(RunArgs),
    /// Compare a computed scan with a measured curve.
    FitSigma {
        /// Scan CSV written by `qreflect scan`.
        theory: PathBuf,
        /// CSV with `k_perp_nm_inv,probability` columns.
        experiment: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Surface preset name.
    #[arg(long)]
    surface: Option<String>,
    /// Stagnation temperature in K (repeatable).
    #[arg(long = "T0")]
    t0: Vec<f64>,
    /// Grazing angles in mrad, `start:stop:count[log|lin]`.
    #[arg(long)]
    angles: Option<AngleSpec>,
    /// Woods–Saxon absorber `A,alpha,zi` (meV, -, Å), or `off`.
    #[arg(long, allow_hyphen_values = true)]
    absorber: Option<String>,
    /// Diffraction channel truncation.
    #[arg(long)]
    nmax: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownPreset { .. } | Error::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn parse_absorber(s: &str) -> Result<AbsorberParams, Failure> {
    if s.eq_ignore_ascii_case("off") {
        return Ok(AbsorberParams::disabled());
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--absorber expects A,alpha,zi, got `{s}`")))?;
    match v.as_slice() {
        &[amplitude, alpha, z_i] => Ok(AbsorberParams {
            amplitude,
            alpha,
            z_i,
            enabled: true,
        }),
        _ => Err(Failure::Usage(format!(
            "--absorber expects A,alpha,zi, got `{s}`"
        ))),
    }
}

fn resolve(args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(p) => {
            RunConfig::load(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = &args.surface {
        cfg.surface = SurfaceChoice::Preset(s.clone());
    }
    if !args.t0.is_empty() {
        cfg.temperatures = args.t0.clone();
    }
    if let Some(a) = args.angles {
        cfg.angles = a;
    }
    if let Some(a) = &args.absorber {
        cfg.absorber = parse_absorber(a)?;
    }
    if args.nmax.is_some() {
        cfg.n_max = args.nmax;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    cfg.validate().map_err(|e| match e {
        Error::UnknownPreset { .. } | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
        e => Failure::Runtime(e.to_string()),
    })?;
    Ok(cfg)
}

/// Writes the resolved configuration next to the results and echoes it.
fn echo_config(cfg: &RunConfig) -> Result<(), Failure> {
    let text = cfg.to_toml_string()?;
    eprintln!("# resolved configuration\n{text}");
    std::fs::create_dir_all(&cfg.out).map_err(|e| Failure::Runtime(e.to_string()))?;
    std::fs::write(cfg.out.join("run_config.toml"), &text)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(())
}

fn cmd_scan(args: &RunArgs) -> Result<(), Failure> {
    let cfg = resolve(args)?;
    echo_config(&cfg)?;
    let surface = cfg.surface()?;
    let angles = cfg.angles.angles();
    for &t0 in &cfg.temperatures {
        let beam = BeamSource::new(t0)?;
        let scan = run_scan_with(&surface, &beam, &angles, cfg.absorber, cfg.grid)?;
        let path = save_scan(&cfg.out, &scan)?;
        println!("{}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct Gate {
    name: String,
    pass: bool,
    value: f64,
    limit: f64,
    note: String,
}

#[derive(Serialize)]
struct Report {
    pass: bool,
    gates: Vec<Gate>,
}

fn gate(name: &str, value: Result<f64, Error>, limit: f64, note: &str) -> Gate {
    match value {
        Ok(v) => Gate {
            name: name.into(),
            pass: v < limit,
            value: v,
            limit,
            note: note.into(),
        },
        Err(e) => Gate {
            name: name.into(),
            pass: false,
            value: f64::NAN,
            limit,
            note: e.to_string(),
        },
    }
}

/// Up to three angles spread over the configured grid.
fn sample_angles(cfg: &RunConfig) -> Vec<f64> {
    let all = cfg.angles.angles();
    let mut idx = vec![0, all.len() / 2, all.len() - 1];
    idx.dedup();
    idx.into_iter().map(|i| all[i]).collect()
}

fn max_over<F>(cfg: &RunConfig, mut f: F) -> Result<f64, Error>
where
    F: FnMut(&BeamSource, f64) -> Result<f64, Error>,
{
    let mut worst = 0.0f64;
    for &t0 in &cfg.temperatures {
        let beam = BeamSource::new(t0)?;
        for theta in sample_angles(cfg) {
            worst = worst.max(f(&beam, theta)?);
        }
    }
    Ok(worst)
}

fn cmd_verify(args: &RunArgs) -> Result<bool, Failure> {
    let cfg = resolve(args)?;
    echo_config(&cfg)?;
    let surface = cfg.surface()?;
    let grid = cfg.grid;
    let mut gates = Vec::new();

    gates.push(gate(
        "unitarity",
        max_over(&cfg, |b, th| {
            Ok((1.0 - solve_point(&surface, b, th, AbsorberParams::disabled(), grid)?.p_qr).abs())
        }),
        1e-6,
        "absorber off: |1 - sum I_n|",
    ));

    let sub = if cfg.absorber.enabled {
        gate(
            "subunitarity",
            max_over(&cfg, |b, th| {
                let p = solve_point(&surface, b, th, cfg.absorber, grid)?.p_qr;
                Ok(if p > 0.0 && p < 1.0 { 0.0 } else { 1.0 })
            }),
            0.5,
            "absorber on: 0 < P_QR < 1",
        )
    } else {
        Gate {
            name: "subunitarity".into(),
            pass: false,
            value: 1.0,
            limit: 1.0,
            note: "absorber disabled: P_QR = 1 by unitarity, no quantum reflection is isolated"
                .into(),
        }
    };
    gates.push(sub);

    if cfg.absorber.enabled {
        let variants = default_absorber_variants(cfg.absorber);
        gates.push(gate(
            "absorber_independence",
            max_over(&cfg, |b, th| {
                Ok(absorber_independence_report(&surface, b, th, &variants, grid)?.spread)
            }),
            0.01,
            "max relative P_QR spread over |A| x {0.5,1,2}, alpha in {1,2,4}",
        ));
    }

    let fine = Grid {
        step: grid.step.halved(),
        ..grid
    };
    gates.push(gate(
        "grid_convergence",
        max_over(&cfg, |b, th| {
            let a = solve_point(&surface, b, th, cfg.absorber, grid)?;
            let c = solve_point(&surface, b, th, cfg.absorber, fine)?;
            Ok(a.intensities
                .iter()
                .zip(&c.intensities)
                .chain(std::iter::once((&a.p_qr, &c.p_qr)))
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
        }),
        1e-4,
        "max absolute change under step halving",
    ));

    if !surface.is_flat() {
        let wide = surface.clone().with_n_max(2 * surface.n_max());
        gates.push(gate(
            "channel_convergence",
            max_over(&cfg, |b, th| {
                let a = solve_point(&surface, b, th, cfg.absorber, grid)?;
                let c = solve_point(&wide, b, th, cfg.absorber, grid)?;
                Ok(a.intensities
                    .iter()
                    .zip(&c.intensities)
                    .chain(std::iter::once((&a.p_qr, &c.p_qr)))
                    .filter(|(x, _)| **x > 0.0)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs() / x)))
            }),
            1e-3,
            "max relative change when n_max doubles",
        ));
    }

    let pass = gates.iter().all(|g| g.pass);
    let report = Report { pass, gates };
    let text = toml::to_string(&report).map_err(|e| Failure::Runtime(e.to_string()))?;
    print!("{text}");
    std::fs::write(cfg.out.join("verify_report.toml"), &text)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    Ok(pass)
}

fn cmd_fit_sigma(theory: &Path, experiment: &Path) -> Result<(), Failure> {
    let theo = load_theory_curve(theory)
        .map_err(|e| Failure::Usage(format!("{}: {e}", theory.display())))?;
    // a scan CSV is also accepted as the reference curve
    let exp = ExperimentalCurve::from_csv(experiment)
        .or_else(|_| load_theory_curve(experiment))
        .map_err(|e| Failure::Usage(format!("{}: {e}", experiment.display())))?;
    let matched = match_curves(&exp, &theo)?;
    println!("k_perp_nm_inv,p_exp,p_theo");
    for m in &matched {
        println!("{:.11e},{:.11e},{:.11e}", m.k_perp, m.p_exp, m.p_theo);
    }
    let sigma = sigma_between(&exp, &theo)?;
    println!("sigma = {sigma:.6}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scan(a) => cmd_scan(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::FitSigma { theory, experiment } => cmd_fit_sigma(theory, experiment).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
