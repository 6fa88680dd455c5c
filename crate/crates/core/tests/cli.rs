use std::path::Path;
use std::process::{Command, Output};

fn qreflect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qreflect"))
        .args(args)
        .output()
        .unwrap()
}

fn scan_into(dir: &Path) -> String {
    let out = qreflect(&[
        "scan",
        "--surface",
        "glass_slide",
        "--T0",
        "50",
        "--angles",
        "0.5:20:60log",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read_to_string(dir.join("glass_slide_T50K.csv")).unwrap()
}

#[test]
fn scan_writes_one_row_per_angle_and_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = scan_into(a.path());
    assert_eq!(first.lines().count(), 61);
    assert_eq!(
        first.lines().next().unwrap(),
        "theta_grazing_mrad,k_perp_nm_inv,p_qr,I_0"
    );
    assert_eq!(first, scan_into(b.path()));
    assert!(a.path().join("run_config.toml").exists());
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qreflect(&[
        "scan",
        "--surface",
        "teflon",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("glass_slide") && err.contains("structured_cr"),
        "{err}"
    );
}

#[test]
fn malformed_absorber_is_a_usage_error() {
    let out = qreflect(&["scan", "--absorber", "-8,2"]);
    assert_eq!(out.status.code(), Some(2));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn fit_sigma_hand_case() {
    let dir = tempfile::tempdir().unwrap();
    let theory = write(
        dir.path(),
        "theo.csv",
        "k_perp_nm_inv,p_qr\n0.1,0.9\n0.2,0.8\n0.3,0.7\n0.4,0.6\n",
    );
    let exp = write(
        dir.path(),
        "exp.csv",
        "k_perp_nm_inv,probability\n0.15,1.0\n0.25,0.75\n0.5,0.1\n",
    );
    let out = qreflect(&["fit-sigma", &theory, &exp]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let sigma: f64 = text
        .lines()
        .last()
        .unwrap()
        .trim_start_matches("sigma = ")
        .parse()
        .unwrap();
    let expected = (0.15f64.powi(2) / 2.0).sqrt();
    assert!((sigma - expected).abs() < 1e-6, "{sigma} vs {expected}");
}

#[test]
fn fit_sigma_needs_two_overlapping_points() {
    let dir = tempfile::tempdir().unwrap();
    let theory = write(
        dir.path(),
        "theo.csv",
        "k_perp_nm_inv,p_qr\n0.1,0.9\n0.2,0.8\n",
    );
    let exp = write(
        dir.path(),
        "exp.csv",
        "k_perp_nm_inv,probability\n0.15,0.85\n0.9,0.1\n",
    );
    let out = qreflect(&["fit-sigma", &theory, &exp]);
    assert!(!out.status.success());
}

#[test]
fn verify_reports_gates() {
    let dir = tempfile::tempdir().unwrap();
    let out = qreflect(&[
        "verify",
        "--surface",
        "gaas_wafer",
        "--T0",
        "8.7",
        "--angles",
        "0.05:0.2:2log",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let report = std::fs::read_to_string(dir.path().join("verify_report.toml")).unwrap();
    for gate in [
        "unitarity",
        "subunitarity",
        "absorber_independence",
        "grid_convergence",
    ] {
        assert!(report.contains(gate), "{report}");
    }
    let pass = report.starts_with("pass = true");
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }));
}
