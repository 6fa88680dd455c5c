//! Beam kinematics, angle scans and comparisons with measured curves.
//!
//! A supersonic He beam from a nozzle at stagnation temperature `T0` has
//! `E_i = (5/2) k_B T0`. Scans run one close-coupling calculation per grazing
//! angle and report `P_QR` against both the angle and
//! `k_perp = k_i sin θ` (nm⁻¹).

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{build_channel_set, theory_to_experiment_order, ScatteringConditions};
use crate::error::{Error, Result};
use crate::potential::AbsorberParams;
use crate::presets::Surface;
use crate::solver::{solve, CoupledChannelProblem, Grid};
use crate::units::{angstrom_inv_to_nm_inv, kinetic_prefactor, CONSTANTS, HBAR_SI, K_BOLTZMANN_SI};

/// Largest grazing angle accepted by [`run_scan`], rad.
pub const MAX_SCAN_ANGLE: f64 = 25e-3;
/// Environment variable capping the number of scan worker threads.
pub const THREADS_ENV: &str = "QREFLECT_THREADS";

/// A monochromatic He beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSource {
    /// Stagnation temperature, K.
    pub t0: f64,
    /// Incident wave number, Å⁻¹.
    pub k_i: f64,
}

impl BeamSource {
    pub fn new(t0: f64) -> Result<Self> {
        check_temperature(t0)?;
        let e_i = 2.5 * CONSTANTS.k_boltzmann * t0;
        Ok(Self {
            t0,
            k_i: (e_i / kinetic_prefactor()).sqrt(),
        })
    }

    /// Kinetic energy, meV.
    pub fn energy(&self) -> f64 {
        2.5 * CONSTANTS.k_boltzmann * self.t0
    }

    pub fn k_nm_inv(&self) -> f64 {
        angstrom_inv_to_nm_inv(self.k_i)
    }
}

fn check_temperature(t0: f64) -> Result<()> {
    if t0 > 0.0 && t0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {t0} K"
        )))
    }
}

/// `k = √(5 m k_B T0)/ħ` in nm⁻¹, evaluated in SI.
pub fn wavevector_from_temperature(t0: f64) -> Result<f64> {
    check_temperature(t0)?;
    Ok((5.0 * CONSTANTS.he_mass * K_BOLTZMANN_SI * t0).sqrt() / HBAR_SI * 1e-9)
}

/// `k_perp = k sin θ` in nm⁻¹ for grazing angle `theta_grazing`.
pub fn k_perp(t0: f64, theta_grazing: f64) -> Result<f64> {
    if !(theta_grazing > 0.0 && theta_grazing < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "grazing angle must lie in (0, π/2), got {theta_grazing}"
        )));
    }
    Ok(wavevector_from_temperature(t0)? * theta_grazing.sin())
}

/// `count` grazing angles in rad between `start` and `stop` (both in rad).
pub fn angle_grid(start: f64, stop: f64, count: usize, log: bool) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = |i: usize| i as f64 / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == count - 1 {
                stop
            } else if log {
                start * (stop / start).powf(step(i))
            } else {
                start + (stop - start) * step(i)
            }
        })
        .collect()
}

/// 60 log-spaced angles from 0.1 to 25 mrad.
pub fn default_angles() -> Vec<f64> {
    angle_grid(1e-4, MAX_SCAN_ANGLE, 60, true)
}

/// One scan angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    /// rad.
    pub theta_grazing: f64,
    /// nm⁻¹.
    pub k_perp: f64,
    pub p_qr: f64,
    /// Intensity per theory order, aligned with [`ScanResult::orders`]; 0 when closed.
    pub intensities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub surface: String,
    pub beam: BeamSource,
    /// Theory orders, specular first then `+1, -1, +2, -2, …` in experimental labels.
    pub orders: Vec<i32>,
    pub points: Vec<ScanPoint>,
}

impl ScanResult {
    pub fn k_perp(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.k_perp).collect()
    }

    pub fn p_qr(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p_qr).collect()
    }

    /// Largest rise of `P_QR` between consecutive points (0 for a monotone scan).
    pub fn monotonicity_violation(&self) -> f64 {
        self.points
            .windows(2)
            .fold(0.0f64, |m, w| m.max(w[1].p_qr - w[0].p_qr))
    }

    /// `P_QR` interpolated at `k` (nm⁻¹) with a monotone cubic.
    pub fn p_qr_at(&self, k: f64) -> Option<f64> {
        MonotoneCubic::new(&self.k_perp(), &self.p_qr())
            .ok()?
            .eval(k)
    }
}

/// Column order for output: specular, then experimental orders +1, -1, +2, -2, ….
fn output_orders(n_max: usize) -> Vec<i32> {
    let mut orders = vec![0];
    for m in 1..=n_max as i32 {
        orders.push(theory_to_experiment_order(m));
        orders.push(theory_to_experiment_order(-m));
    }
    orders
}

/// Number of scan workers: `QREFLECT_THREADS` if set to a positive integer, else the rayon default.
pub fn worker_threads() -> usize {
    let default = rayon::current_num_threads();
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(default)
}

/// Solves one (surface, beam, angle) point.
pub fn solve_point(
    surface: &Surface,
    beam: &BeamSource,
    theta_grazing: f64,
    absorber: AbsorberParams,
    grid: Grid,
) -> Result<ScanPoint> {
    let c = ScatteringConditions::from_grazing(beam.k_i, theta_grazing, surface.period())?;
    let channels = build_channel_set(&c, surface.n_max());
    let problem = CoupledChannelProblem::new(
        channels,
        surface.potential,
        surface.grating.as_ref(),
        absorber,
        grid,
    )?;
    let sol = solve(&problem)?;
    Ok(ScanPoint {
        theta_grazing,
        k_perp: k_perp(beam.t0, theta_grazing)?,
        p_qr: sol.p_qr,
        intensities: output_orders(surface.n_max())
            .iter()
            .map(|&n| sol.intensity(n))
            .collect(),
    })
}

/// [`run_scan_with`] on the default grid.
pub fn run_scan(
    surface: &Surface,
    beam: &BeamSource,
    angles: &[f64],
    absorber: AbsorberParams,
) -> Result<ScanResult> {
    run_scan_with(surface, beam, angles, absorber, Grid::default())
}

/// Solves every angle, in parallel, and assembles the records in angle order.
pub fn run_scan_with(
    surface: &Surface,
    beam: &BeamSource,
    angles: &[f64],
    absorber: AbsorberParams,
    grid: Grid,
) -> Result<ScanResult> {
    if angles.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    if let Some(&bad) = angles.iter().find(|&&a| !(a > 0.0 && a <= MAX_SCAN_ANGLE)) {
        return Err(Error::InvalidParameter(format!(
            "scan angles must lie in (0, 25] mrad, got {} mrad",
            bad * 1e3
        )));
    }
    if angles.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "scan angles must be strictly increasing".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let points = pool.install(|| {
        angles
            .par_iter()
            .map(|&theta| {
                solve_point(surface, beam, theta, absorber, grid).map_err(|e| Error::ScanPoint {
                    theta_mrad: theta * 1e3,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ScanResult {
        surface: surface.name.clone(),
        beam: *beam,
        orders: output_orders(surface.n_max()),
        points,
    })
}

/// A measured reflection curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentalCurve {
    pub label: String,
    /// `(k_perp in nm⁻¹, probability)` with strictly increasing `k_perp`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Deserialize)]
struct CurveRow {
    k_perp_nm_inv: f64,
    probability: f64,
}

impl ExperimentalCurve {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(k, p)) = points.iter().find(|(_, p)| !(0.0..=1.0).contains(p)) {
            return Err(Error::Parse(format!(
                "probability {p} at k_perp = {k} is outside [0, 1]"
            )));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Parse("k_perp must be strictly increasing".into()));
        }
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    /// Reads `k_perp_nm_inv,probability` rows after a header line.
    pub fn from_reader<R: std::io::Read>(label: impl Into<String>, reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let points = rdr
            .deserialize::<CurveRow>()
            .map(|r| r.map(|r| (r.k_perp_nm_inv, r.probability)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(label, points)
    }

    pub fn from_csv(path: &Path) -> Result<Self> {
        let label = path
            .file_stem()
            .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
        Self::from_reader(label, std::fs::File::open(path)?)
    }

    /// Builds a curve from the `P_QR` column of a scan.
    pub fn from_scan(scan: &ScanResult) -> Result<Self> {
        Self::new(
            scan.surface.clone(),
            scan.points.iter().map(|p| (p.k_perp, p.p_qr)).collect(),
        )
    }
}

/// Monotone piecewise-cubic Hermite interpolant (Fritsch–Carlson slopes).
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InsufficientPoints {
                needed: 2,
                got: x.len().min(y.len()),
            });
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "interpolation nodes must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let delta: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut m = vec![0.0; n];
        m[0] = delta[0];
        m[n - 1] = delta[n - 2];
        for i in 1..n - 1 {
            m[i] = if delta[i - 1] * delta[i] <= 0.0 {
                0.0
            } else {
                0.5 * (delta[i - 1] + delta[i])
            };
        }
        for i in 0..n - 1 {
            if delta[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let a = m[i] / delta[i];
            let b = m[i + 1] / delta[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                m[i] = t * a * delta[i];
                m[i + 1] = t * b * delta[i];
            }
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    /// Value at `t`; `None` outside the node range.
    pub fn eval(&self, t: f64) -> Option<f64> {
        let (first, last) = (self.x[0], *self.x.last()?);
        if !(t >= first && t <= last) {
            return None;
        }
        let i = self
            .x
            .partition_point(|&xi| xi <= t)
            .clamp(1, self.x.len() - 1)
            - 1;
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[i]
                + (s3 - 2.0 * s2 + s) * h * self.m[i]
                + (-2.0 * s3 + 3.0 * s2) * self.y[i + 1]
                + (s3 - s2) * h * self.m[i + 1],
        )
    }
}

/// `σ = √[Σ ((P_exp - P_theo)/P_exp)² / (N(N-1))]` over paired values.
pub fn sigma_from_pairs(p_exp: &[f64], p_theo: &[f64]) -> Result<f64> {
    let n = p_exp.len().min(p_theo.len());
    if n < 2 {
        return Err(Error::InsufficientPoints { needed: 2, got: n });
    }
    if let Some(p) = p_exp.iter().find(|&&p| !(p > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "experimental probability must be positive, got {p}"
        )));
    }
    let sum: f64 = p_exp
        .iter()
        .zip(p_theo)
        .map(|(e, t)| ((e - t) / e).powi(2))
        .sum();
    Ok((sum / (n * (n - 1)) as f64).sqrt())
}

/// Experimental points inside the theory range, paired with interpolated theory.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPoint {
    pub k_perp: f64,
    pub p_exp: f64,
    pub p_theo: f64,
}

/// Interpolates the theory curve onto the experimental nodes it covers.
pub fn match_curves(
    exp: &ExperimentalCurve,
    theo: &ExperimentalCurve,
) -> Result<Vec<MatchedPoint>> {
    let (x, y): (Vec<f64>, Vec<f64>) = theo.points.iter().cloned().unzip();
    let interp = MonotoneCubic::new(&x, &y)?;
    Ok(exp
        .points
        .iter()
        .filter_map(|&(k, p)| {
            interp.eval(k).map(|t| MatchedPoint {
                k_perp: k,
                p_exp: p,
                p_theo: t,
            })
        })
        .collect())
}

/// σ between a measured curve and a computed scan.
pub fn sigma_metric(exp: &ExperimentalCurve, theo: &ScanResult) -> Result<f64> {
    sigma_between(exp, &ExperimentalCurve::from_scan(theo)?)
}

/// σ between two curves, the second interpolated onto the first.
pub fn sigma_between(exp: &ExperimentalCurve, theo: &ExperimentalCurve) -> Result<f64> {
    let matched = match_curves(exp, theo)?;
    let (e, t): (Vec<f64>, Vec<f64>) = matched.iter().map(|m| (m.p_exp, m.p_theo)).unzip();
    sigma_from_pairs(&e, &t)
}

/// Least-squares fit `P ≈ intercept - 2 b k_perp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdFit {
    pub intercept: f64,
    /// Threshold length, nm.
    pub b: f64,
    pub r_squared: f64,
    /// Euclidean norm of the residuals.
    pub residual_norm: f64,
    pub n_points: usize,
}

/// Fits the points with `0 < k_perp <= cutoff` (nm⁻¹).
pub fn threshold_fit(scan: &ScanResult, cutoff: f64) -> Result<ThresholdFit> {
    let pts: Vec<(f64, f64)> = scan
        .points
        .iter()
        .filter(|p| p.k_perp > 0.0 && p.k_perp <= cutoff)
        .map(|p| (p.k_perp, p.p_qr))
        .collect();
    fit_line(&pts)
}

/// Ordinary least squares on `(k, P)` pairs.
pub fn fit_line(pts: &[(f64, f64)]) -> Result<ThresholdFit> {
    if pts.len() < 5 {
        return Err(Error::InsufficientPoints {
            needed: 5,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(ThresholdFit {
        intercept,
        b: -0.5 * slope,
        r_squared,
        residual_norm: ss_res.sqrt(),
        n_points: pts.len(),
    })
}

/// The standard variant suite around `base`: `|A| × {0.5, 1, 2}` × `α ∈ {1, 2, 4}`,
/// with `base` first.
pub fn default_absorber_variants(base: AbsorberParams) -> Vec<AbsorberParams> {
    let mut v = vec![base];
    for f in [0.5, 1.0, 2.0] {
        for alpha in [1.0, 2.0, 4.0] {
            let w = base.scaled(f).with_alpha(alpha);
            if w != base {
                v.push(w);
            }
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorberReport {
    pub variants: Vec<AbsorberParams>,
    pub p_qr: Vec<f64>,
    /// max_v |P_v - P_0| / P_0, relative to the first variant.
    pub spread: f64,
    pub warning: Option<String>,
}

/// Solves one point under every absorber variant and reports the spread.
pub fn absorber_independence_report(
    surface: &Surface,
    beam: &BeamSource,
    theta_grazing: f64,
    variants: &[AbsorberParams],
    grid: Grid,
) -> Result<AbsorberReport> {
    if variants.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: variants.len(),
        });
    }
    let p_qr = variants
        .iter()
        .map(|&w| solve_point(surface, beam, theta_grazing, w, grid).map(|p| p.p_qr))
        .collect::<Result<Vec<_>>>()?;
    let spread = p_qr
        .iter()
        .fold(0.0f64, |m, p| m.max((p - p_qr[0]).abs() / p_qr[0]));
    let warning = variants.iter().any(|w| !w.enabled).then(|| {
        "a variant has the absorber disabled: it measures total, not quantum, reflection".to_owned()
    });
    Ok(AbsorberReport {
        variants: variants.to_vec(),
        p_qr,
        spread,
        warning,
    })
}
