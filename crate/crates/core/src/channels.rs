//! Diffraction channel basis and kinematics.
//!
//! Channel `n` carries parallel momentum `k_i sin θ + 2πn/d` where θ is the
//! incidence angle from the surface normal; its perpendicular wave number obeys
//!
//! ```text
//! k_{n,z}² = k_i² - (k_i sin θ + 2πn/d)²
//! ```
//!
//! The experiment quotes grazing angles (from the surface plane) and labels
//! orders with the opposite sign: theory order `+n` is experimental order
//! `-n`. The conversion lives in [`theory_to_experiment_order`] and is applied
//! only when results are written out.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Beam and surface geometry for one scattering calculation.
///
/// The grazing angle is stored and the normal angle derived from it, since
/// `π/2 - θ_normal` loses digits at sub-mrad grazing angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringConditions {
    /// Incident wave number, Å⁻¹.
    pub k_i: f64,
    theta_grazing: f64,
    /// Grating period in Å; `None` for a flat surface.
    pub d_period: Option<f64>,
}

/// Grazing (from the surface plane) → normal (from the surface normal).
pub fn grazing_to_normal(theta_grazing: f64) -> f64 {
    FRAC_PI_2 - theta_grazing
}

/// Normal → grazing.
pub fn normal_to_grazing(theta_normal: f64) -> f64 {
    FRAC_PI_2 - theta_normal
}

/// Theory order `n` ↔ experimental order `-n`.
pub fn theory_to_experiment_order(n: i32) -> i32 {
    -n
}

impl ScatteringConditions {
    pub fn from_grazing(k_i: f64, theta_grazing: f64, d_period: Option<f64>) -> Result<Self> {
        if !(k_i > 0.0 && k_i.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "k_i must be positive, got {k_i}"
            )));
        }
        if !(theta_grazing > 0.0 && theta_grazing <= FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "grazing angle must lie in (0, π/2], got {theta_grazing}"
            )));
        }
        if let Some(d) = d_period {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "grating period must be positive, got {d}"
                )));
            }
        }
        Ok(Self {
            k_i,
            theta_grazing,
            d_period,
        })
    }

    pub fn from_normal(k_i: f64, theta_normal: f64, d_period: Option<f64>) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&theta_normal) {
            return Err(Error::InvalidParameter(format!(
                "normal angle must lie in [0, π/2), got {theta_normal}"
            )));
        }
        Self::from_grazing(k_i, normal_to_grazing(theta_normal), d_period)
    }

    pub fn theta_grazing(&self) -> f64 {
        self.theta_grazing
    }

    pub fn theta_normal(&self) -> f64 {
        grazing_to_normal(self.theta_grazing)
    }

    pub fn is_flat(&self) -> bool {
        self.d_period.is_none()
    }

    /// Reciprocal lattice spacing 2π/d, Å⁻¹ (0 for a flat surface).
    pub fn reciprocal_spacing(&self) -> f64 {
        self.d_period.map_or(0.0, |d| 2.0 * PI / d)
    }

    /// Parallel wave number of channel `n`, Å⁻¹.
    pub fn parallel_wavenumber(&self, n: i32) -> f64 {
        self.k_i * self.theta_grazing.cos() + self.reciprocal_spacing() * n as f64
    }

    /// Incident perpendicular wave number `k_i sin θ_grazing`, Å⁻¹.
    pub fn perpendicular_wavenumber(&self) -> f64 {
        self.k_i * self.theta_grazing.sin()
    }
}

/// `k_{n,z}²` in Å⁻².
///
/// Evaluated as `(k_i - q)(k_i + q)` with `k_i - q = 2 k_i sin²(θ_g/2) - Gn`
/// so that no digits are lost to cancellation at grazing incidence.
pub fn kz_squared(n: i32, c: &ScatteringConditions) -> Result<f64> {
    if n != 0 && c.is_flat() {
        return Err(Error::FlatSurfaceOrder { n });
    }
    let g_n = c.reciprocal_spacing() * n as f64;
    let half = (0.5 * c.theta_grazing).sin();
    let deficit = 2.0 * c.k_i * half * half - g_n;
    let q = c.parallel_wavenumber(n);
    Ok(deficit * (c.k_i + q))
}

/// The truncated channel basis n ∈ [-n_max, n_max].
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub indices: Vec<i32>,
    /// k_{n,z}² per channel, Å⁻².
    pub kz2: Vec<f64>,
    pub open: Vec<bool>,
}

impl ChannelSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of channel `n` in the basis.
    pub fn position(&self, n: i32) -> Option<usize> {
        self.indices.iter().position(|&m| m == n)
    }

    pub fn specular(&self) -> usize {
        self.position(0)
            .expect("specular channel is always present")
    }

    pub fn open_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.open[i]).collect()
    }

    pub fn n_max(&self) -> usize {
        self.indices
            .iter()
            .map(|n| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// Builds channels `-n_max..=n_max`; a flat surface always yields `{0}`.
pub fn build_channel_set(c: &ScatteringConditions, n_max: usize) -> ChannelSet {
    let n_max = if c.is_flat() { 0 } else { n_max as i32 };
    let indices: Vec<i32> = (-n_max..=n_max).collect();
    let kz2: Vec<f64> = indices
        .iter()
        .map(|&n| kz_squared(n, c).expect("orders are valid for this surface"))
        .collect();
    let open = kz2.iter().map(|&k| k > 0.0).collect();
    ChannelSet { indices, kz2, open }
}

/// Exit angle (grazing convention) of experimental order `n`:
/// `cos θ_n = cos θ_i - 2πn/(d k_i)`.
///
/// Computed through `1 - cos θ_n = 2 sin²(θ_i/2) + 2πn/(d k_i)` to keep
/// sub-mrad angles accurate.
pub fn bragg_angle(n: i32, c: &ScatteringConditions) -> Result<f64> {
    if n == 0 {
        return Ok(c.theta_grazing);
    }
    if c.is_flat() {
        return Err(Error::FlatSurfaceOrder { n });
    }
    let half = (0.5 * c.theta_grazing).sin();
    let one_minus_cos = 2.0 * half * half + c.reciprocal_spacing() * n as f64 / c.k_i;
    if !(0.0..=2.0).contains(&one_minus_cos) {
        return Err(Error::EvanescentOrder {
            n,
            cos_theta: 1.0 - one_minus_cos,
        });
    }
    Ok(2.0 * (0.5 * one_minus_cos).sqrt().asin())
}
