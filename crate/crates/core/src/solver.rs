//! Close-coupling solver.
//!
//! The coupled equations
//!
//! ```text
//! ψ_n''(z) = Σ_n' W_nn'(z) ψ_n'(z),   W = (U(z) - ħ²k_{n,z}²/2m δ_nn') / (ħ²/2m)
//! ```
//!
//! with `U_nn'(z) = λ_{n-n'} V(z) + i V_WS(z) δ_nn'` are integrated outward
//! from the hard wall at `z_min` with Johnson's log-derivative propagator. The
//! log-derivative matrix `Y = ψ'ψ⁻¹` never carries the exponentially growing
//! closed-channel amplitudes, so no renormalization is needed. At `z_max`
//! the solution is matched to flux-normalized plane waves in open channels
//! and decaying exponentials in closed ones.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::potential::{coupling_strength, woods_saxon, AbsorberParams, Grating, SurfacePotential};
use crate::units::kinetic_prefactor;

/// Resolution criterion: the step may not exceed `λ_local / MIN_STEPS_PER_WAVELENGTH`.
pub const MIN_STEPS_PER_WAVELENGTH: f64 = 20.0;
/// Potential magnitude below which `z_max` counts as asymptotic, meV.
pub const ASYMPTOTIC_THRESHOLD: f64 = 1e-8;
const WALL_LOG_DERIVATIVE: f64 = 1e30;

/// Step-size control for the propagator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepControl {
    /// Steps per shortest local wavelength; must be ≥ [`MIN_STEPS_PER_WAVELENGTH`].
    pub steps_per_wavelength: f64,
    /// Upper bound on the step in slowly varying regions, Å.
    pub max_step: f64,
    /// Combine the propagation with a half-step propagation (h⁴ Richardson).
    pub richardson: bool,
    /// Steps in classically forbidden regions may exceed the oscillatory
    /// limit by this factor relative to the decay length.
    pub evanescent_factor: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            steps_per_wavelength: 80.0,
            max_step: 2.0,
            richardson: true,
            evanescent_factor: 16.0,
        }
    }
}

impl StepControl {
    /// Same control with every step halved.
    pub fn halved(&self) -> Self {
        Self {
            steps_per_wavelength: 2.0 * self.steps_per_wavelength,
            max_step: 0.5 * self.max_step,
            ..*self
        }
    }

    /// Same control with every step scaled by `factor` (> 1 is coarser).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            steps_per_wavelength: self.steps_per_wavelength / factor,
            max_step: self.max_step * factor,
            ..*self
        }
    }
}

/// Integration range and step control.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    /// Hard-wall position, Å.
    pub z_min: f64,
    /// Matching position, Å.
    pub z_max: f64,
    pub step: StepControl,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            z_min: -13.0,
            z_max: 2000.0,
            step: StepControl::default(),
        }
    }
}

/// A fully specified close-coupling calculation.
#[derive(Debug, Clone)]
pub struct CoupledChannelProblem {
    pub channels: ChannelSet,
    pub potential: SurfacePotential,
    /// λ_m for m = 0..=2 n_max; the (n, n') coupling is λ_{|n-n'|}.
    pub couplings: Vec<f64>,
    pub absorber: AbsorberParams,
    pub grid: Grid,
    coupling_matrix: DMatrix<f64>,
    coupling_range: (f64, f64),
}

impl CoupledChannelProblem {
    /// `grating` supplies the couplings; `None` means a flat surface, which
    /// requires a single-channel basis.
    pub fn new(
        channels: ChannelSet,
        potential: SurfacePotential,
        grating: Option<&Grating>,
        absorber: AbsorberParams,
        grid: Grid,
    ) -> Result<Self> {
        absorber.validate()?;
        if !(grid.z_min < 0.0 && potential.z_bar < grid.z_max && grid.z_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid must satisfy z_min < 0 < z_bar < z_max, got [{}, {}] with z_bar = {}",
                grid.z_min, grid.z_max, potential.z_bar
            )));
        }
        if !(grid.step.max_step > 0.0) {
            return Err(Error::InvalidParameter("max_step must be positive".into()));
        }
        let n_max = channels.n_max();
        let couplings: Vec<f64> = match grating {
            Some(g) => (0..=2 * n_max as i32)
                .map(|m| coupling_strength(m, g))
                .collect(),
            None if channels.len() == 1 => vec![1.0],
            None => {
                return Err(Error::InvalidParameter(
                    "a flat surface has only the specular channel".into(),
                ))
            }
        };
        let n = channels.len();
        let coupling_matrix = DMatrix::from_fn(n, n, |i, j| {
            couplings[(channels.indices[i] - channels.indices[j]).unsigned_abs() as usize]
        });
        let coupling_range = SymmetricEigen::new(coupling_matrix.clone())
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        Ok(Self {
            channels,
            potential,
            couplings,
            absorber,
            grid,
            coupling_matrix,
            coupling_range,
        })
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    /// Interaction matrix `U(z)` in meV: `λ_{n-n'} V(z)` everywhere plus the
    /// absorber `i V_WS(z)` on the diagonal. Channel energies are not included.
    pub fn potential_matrix(&self, z: f64) -> DMatrix<Complex64> {
        let v = self.potential.value(z);
        let ws = woods_saxon(z, &self.absorber, self.potential.chi);
        let mut u = self.coupling_matrix.map(|l| Complex64::new(l * v, 0.0));
        for i in 0..self.len() {
            u[(i, i)] += Complex64::new(0.0, ws);
        }
        u
    }

    /// Bounds on the local oscillatory wave number and decay constant, Å⁻¹.
    ///
    /// The eigenvalues of `λ V(z)` span `[λ_lo V, λ_hi V]`; the positive part
    /// of that range is evanescent and the negative part oscillatory.
    pub fn local_wavenumbers(&self, z: f64) -> (f64, f64) {
        let c = kinetic_prefactor();
        let v = self.potential.value(z);
        let ws = woods_saxon(z, &self.absorber, self.potential.chi).abs();
        let (lo, hi) = (self.coupling_range.0 * v, self.coupling_range.1 * v);
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let kz2_max = self.channels.kz2.iter().fold(0.0f64, |m, &k| m.max(k));
        let kz2_min = self.channels.kz2.iter().fold(0.0f64, |m, &k| m.min(k));
        let k_osc = ((ws - lo.min(0.0)) / c + kz2_max).sqrt();
        let kappa = (hi.max(0.0) / c - kz2_min).sqrt();
        (k_osc, kappa)
    }

    /// Step allowed at `z` by the resolution criterion with `spw` steps per wavelength.
    fn resolved_step(&self, z: f64, spw: f64) -> f64 {
        let (k_osc, kappa) = self.local_wavenumbers(z);
        let osc = 2.0 * PI / (spw * k_osc);
        let eva = self.grid.step.evanescent_factor * 2.0 * PI / (spw * kappa);
        osc.min(eva)
    }

    /// Lays out Simpson panels `(z_start, h)` of two steps each from `z_min` to `z_max`.
    pub fn panels(&self) -> Result<Vec<(f64, f64)>> {
        let step = self.grid.step;
        if !(step.steps_per_wavelength >= MIN_STEPS_PER_WAVELENGTH) {
            let z = self.grid.z_min;
            return Err(Error::StepTooCoarse {
                z,
                step: self.resolved_step(z, step.steps_per_wavelength),
                limit: self.resolved_step(z, MIN_STEPS_PER_WAVELENGTH),
            });
        }
        let (z_min, z_max) = (self.grid.z_min, self.grid.z_max);
        let mut panels = Vec::new();
        let mut z = z_min;
        while z < z_max {
            let mut h = self
                .resolved_step(z, step.steps_per_wavelength)
                .min(step.max_step);
            // the bound may grow across the panel (toward the well)
            h = h.min(self.resolved_step((z + 2.0 * h).min(z_max), step.steps_per_wavelength));
            h = h.min(self.resolved_step(z + h, step.steps_per_wavelength));
            // V'' jumps at z̄; keep it on a panel edge
            let z_bar = self.potential.z_bar;
            if z < z_bar && z + 2.0 * h > z_bar {
                h = 0.5 * (z_bar - z);
            }
            if z + 2.0 * h >= z_max || z_max - (z + 2.0 * h) < 1e-9 * h {
                h = 0.5 * (z_max - z);
                panels.push((z, h));
                break;
            }
            panels.push((z, h));
            z += 2.0 * h;
        }
        Ok(panels)
    }

    /// `W(z) = (U(z) - ħ²k_{n,z}²/2m) / (ħ²/2m)`, Å⁻².
    fn w_matrix(&self, z: f64) -> DMatrix<Complex64> {
        let c = kinetic_prefactor();
        let mut w = self.potential_matrix(z) / Complex64::new(c, 0.0);
        for (i, k2) in self.channels.kz2.iter().enumerate() {
            w[(i, i)] -= Complex64::new(*k2, 0.0);
        }
        w
    }
}

/// Log-derivative matrix at the end of the propagation.
#[derive(Debug, Clone)]
pub struct PropagationState {
    pub y: DMatrix<Complex64>,
    pub z: f64,
    /// Number of Simpson panels in the base grid.
    pub panels: usize,
}

/// `(I + hY)⁻¹ Y`.
fn free_step(y: &DMatrix<Complex64>, h: f64) -> Option<DMatrix<Complex64>> {
    let n = y.nrows();
    let a = DMatrix::<Complex64>::identity(n, n) + y * Complex64::new(h, 0.0);
    a.lu().solve(y)
}

/// Johnson's midpoint correction `(I - h²W/6)⁻¹ W`.
fn midpoint_operator(w: &DMatrix<Complex64>, h: f64) -> Option<DMatrix<Complex64>> {
    let n = w.nrows();
    let a = DMatrix::<Complex64>::identity(n, n) - w * Complex64::new(h * h / 6.0, 0.0);
    a.lu().solve(w)
}

fn check_finite(y: &DMatrix<Complex64>, z: f64) -> Result<()> {
    if y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { z })
    }
}

/// Runs the Johnson recursion over the panels, each split into `2·refine` steps.
fn johnson(
    problem: &CoupledChannelProblem,
    panels: &[(f64, f64)],
    refine: usize,
) -> Result<DMatrix<Complex64>> {
    let n = problem.len();
    let mut y = DMatrix::<Complex64>::identity(n, n) * Complex64::new(WALL_LOG_DERIVATIVE, 0.0);
    for &(z0, h_panel) in panels {
        let h = h_panel / refine as f64;
        let third = Complex64::new(h / 3.0, 0.0);
        for sub in 0..refine {
            let za = z0 + 2.0 * h * sub as f64;
            let zm = za + h;
            let zb = za + 2.0 * h;
            y += problem.w_matrix(za) * third;
            y = free_step(&y, h).ok_or(Error::NonFinite { z: za })?;
            let u =
                midpoint_operator(&problem.w_matrix(zm), h).ok_or(Error::NonFinite { z: zm })?;
            y += u * (third * 4.0);
            y = free_step(&y, h).ok_or(Error::NonFinite { z: zm })?;
            y += problem.w_matrix(zb) * third;
        }
        check_finite(&y, z0 + 2.0 * h_panel)?;
    }
    Ok(y)
}

/// Propagates the regular solution (ψ(z_min) = 0) to `z_max`.
pub fn propagate(problem: &CoupledChannelProblem) -> Result<PropagationState> {
    let panels = problem.panels()?;
    let y = if problem.grid.step.richardson {
        let coarse = johnson(problem, &panels, 1)?;
        let fine = johnson(problem, &panels, 2)?;
        (fine * Complex64::new(16.0, 0.0) - coarse) / Complex64::new(15.0, 0.0)
    } else {
        johnson(problem, &panels, 1)?
    };
    Ok(PropagationState {
        y,
        z: problem.grid.z_max,
        panels: panels.len(),
    })
}

/// Scattering amplitudes for specular incidence.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    /// Open channel indices (theory convention), ascending.
    pub open_indices: Vec<i32>,
    /// Flux-normalized open-open S-matrix, rows and columns ordered as `open_indices`.
    pub s_matrix: DMatrix<Complex64>,
    /// S_{n0} for every open n.
    pub s_column: Vec<Complex64>,
    /// |S_{n0}|².
    pub intensities: Vec<f64>,
    /// Σ_n |S_{n0}|².
    pub p_qr: f64,
    /// 1 - Σ_n |S_{n0}|².
    pub unitarity_defect: f64,
}

impl ScatteringSolution {
    /// Intensity of theory order `n`, 0 for closed or absent channels.
    pub fn intensity(&self, n: i32) -> f64 {
        self.open_indices
            .iter()
            .position(|&m| m == n)
            .map_or(0.0, |i| self.intensities[i])
    }
}

/// Matches the propagated log-derivative to asymptotic waves at `z_max`.
///
/// With `ψ = f⁻ - f⁺ S`, `f∓ = exp(∓ikz)/√k` in open channels and
/// `f⁺ = exp(-κ(z - z_max))` in closed ones, the condition `ψ' = Yψ` gives
/// `(Y F⁺ - F⁺') S = Y F⁻ - F⁻'`. Closed-channel functions are normalized at
/// `z_max`, so no exponential can overflow.
pub fn extract_smatrix(
    state: &PropagationState,
    problem: &CoupledChannelProblem,
) -> Result<ScatteringSolution> {
    let channels = &problem.channels;
    let z = state.z;
    let magnitude = problem
        .potential_matrix(z)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.norm()));
    if !(magnitude < ASYMPTOTIC_THRESHOLD) {
        return Err(Error::NotAsymptotic {
            z_max: z,
            magnitude,
        });
    }
    let n = channels.len();
    let open = channels.open_positions();
    let n_open = open.len();
    let i = Complex64::i();

    let mut out = DMatrix::<Complex64>::zeros(n, n);
    let mut out_d = DMatrix::<Complex64>::zeros(n, n);
    for (c, &k2) in channels.kz2.iter().enumerate() {
        if channels.open[c] {
            let k = k2.sqrt();
            let f = (i * k * z).exp() / k.sqrt();
            out[(c, c)] = f;
            out_d[(c, c)] = i * k * f;
        } else {
            out[(c, c)] = Complex64::new(1.0, 0.0);
            out_d[(c, c)] = Complex64::new(-(-k2).sqrt(), 0.0);
        }
    }
    let mut inc = DMatrix::<Complex64>::zeros(n, n_open);
    let mut inc_d = DMatrix::<Complex64>::zeros(n, n_open);
    for (col, &c) in open.iter().enumerate() {
        let k = channels.kz2[c].sqrt();
        let f = (-i * k * z).exp() / k.sqrt();
        inc[(c, col)] = f;
        inc_d[(c, col)] = -i * k * f;
    }
    let lhs = &state.y * &out - out_d;
    let rhs = &state.y * &inc - inc_d;
    let s_full = lhs.lu().solve(&rhs).ok_or(Error::SingularMatching)?;
    let s_matrix = DMatrix::from_fn(n_open, n_open, |r, c| s_full[(open[r], c)]);

    let spec_col = open
        .iter()
        .position(|&c| c == channels.specular())
        .ok_or_else(|| Error::InvalidParameter("specular channel is closed".into()))?;
    let s_column: Vec<Complex64> = (0..n_open).map(|r| s_matrix[(r, spec_col)]).collect();
    let intensities: Vec<f64> = s_column.iter().map(|s| s.norm_sqr()).collect();
    let p_qr: f64 = intensities.iter().sum();
    if s_column
        .iter()
        .any(|s| !s.re.is_finite() || !s.im.is_finite())
    {
        return Err(Error::NonFinite { z });
    }
    Ok(ScatteringSolution {
        open_indices: open.iter().map(|&c| channels.indices[c]).collect(),
        s_matrix,
        s_column,
        intensities,
        p_qr,
        unitarity_defect: 1.0 - p_qr,
    })
}

/// Propagates and extracts in one call.
pub fn solve(problem: &CoupledChannelProblem) -> Result<ScatteringSolution> {
    extract_smatrix(&propagate(problem)?, problem)
}

/// Fractions `Ī_n / P_QR` over the open channels.
pub fn diffraction_efficiencies(sol: &ScatteringSolution) -> Result<Vec<f64>> {
    if !(sol.p_qr >= 1e-12) {
        return Err(Error::NoReflectedFlux { p_qr: sol.p_qr });
    }
    Ok(sol.intensities.iter().map(|i| i / sol.p_qr).collect())
}
