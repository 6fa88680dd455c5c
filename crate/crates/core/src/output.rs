//! CSV emission and ingestion of scan results.
//!
//! Columns are `theta_grazing_mrad,k_perp_nm_inv,p_qr,I_0[,I_+1,I_-1,...]`
//! with diffraction orders labelled in the experimental convention. Numbers
//! carry 12 significant digits, so identical runs give identical files.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::channels::theory_to_experiment_order;
use crate::error::{Error, Result};
use crate::experiment::{ExperimentalCurve, ScanResult};

/// `x` in scientific notation with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn order_label(theory_order: i32) -> String {
    match theory_to_experiment_order(theory_order) {
        0 => "I_0".to_owned(),
        n => format!("I_{n:+}"),
    }
}

pub fn header(scan: &ScanResult) -> Vec<String> {
    let mut h = vec![
        "theta_grazing_mrad".to_owned(),
        "k_perp_nm_inv".to_owned(),
        "p_qr".to_owned(),
    ];
    h.extend(scan.orders.iter().map(|&n| order_label(n)));
    h
}

pub fn write_scan_csv<W: Write>(scan: &ScanResult, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(header(scan))?;
    for p in &scan.points {
        let mut row = vec![
            format_sig12(p.theta_grazing * 1e3),
            format_sig12(p.k_perp),
            format_sig12(p.p_qr),
        ];
        row.extend(p.intensities.iter().map(|&i| format_sig12(i)));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `<dir>/<surface>_T<t0>K.csv`.
pub fn scan_path(dir: &Path, scan: &ScanResult) -> PathBuf {
    dir.join(format!("{}_T{}K.csv", scan.surface, scan.beam.t0))
}

pub fn save_scan(dir: &Path, scan: &ScanResult) -> Result<PathBuf> {
    let path = scan_path(dir, scan);
    let file = std::fs::File::create(&path)?;
    write_scan_csv(scan, std::io::BufWriter::new(file))?;
    Ok(path)
}

/// Reads the `k_perp_nm_inv` and `p_qr` columns of a scan CSV.
pub fn read_theory_curve<R: Read>(label: impl Into<String>, r: R) -> Result<ExperimentalCurve> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    };
    let (ik, ip) = (col("k_perp_nm_inv")?, col("p_qr")?);
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| {
            rec.get(i)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "bad number in row {:?}",
                        rec.position().map(|p| p.line())
                    ))
                })
        };
        points.push((num(ik)?, num(ip)?));
    }
    ExperimentalCurve::new(label, points)
}

pub fn load_theory_curve(path: &Path) -> Result<ExperimentalCurve> {
    let label = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    read_theory_curve(label, std::fs::File::open(path)?)
}
