//! Internal unit system and physical constants.
//!
//! Energies are in meV, lengths in Å, angles in radians and temperatures in
//! K. Wave vectors are carried in Å⁻¹ and converted to nm⁻¹ only at I/O
//! boundaries. Every other module takes its constants from [`CONSTANTS`];
//! there is no second definition of ħ²/2m anywhere in the crate.

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054571817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;
/// Boltzmann constant, J/K (exact).
pub const K_BOLTZMANN_SI: f64 = 1.380649e-23;
/// Mass of a neutral ⁴He atom, kg (4.00260325413 u).
pub const HE4_MASS_SI: f64 = 6.646479072e-27;

/// Joules per meV.
pub const JOULE_PER_MEV: f64 = ELEMENTARY_CHARGE * 1.0e-3;
/// Ångström per metre.
pub const ANGSTROM_PER_METRE: f64 = 1.0e10;
/// Å⁻¹ → nm⁻¹.
pub const NM_INV_PER_ANGSTROM_INV: f64 = 10.0;

/// The constants needed by the scattering problem, expressed in internal
/// units. Immutable; one instance ([`CONSTANTS`]) is shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħ²/(2m) for ⁴He in meV·Å².
    pub hbar2_over_2m: f64,
    /// Boltzmann constant in meV/K.
    pub k_boltzmann: f64,
    /// ⁴He mass in kg, for SI-side conversions only.
    pub he_mass: f64,
}

impl PhysicalConstants {
    /// Constants for a ⁴He projectile.
    pub const fn helium4() -> Self {
        let hbar2_over_2m_si = HBAR_SI * HBAR_SI / (2.0 * HE4_MASS_SI);
        Self {
            hbar2_over_2m: hbar2_over_2m_si / JOULE_PER_MEV
                * ANGSTROM_PER_METRE
                * ANGSTROM_PER_METRE,
            k_boltzmann: K_BOLTZMANN_SI / JOULE_PER_MEV,
            he_mass: HE4_MASS_SI,
        }
    }
}

/// The constants registry.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants::helium4();

/// ħ²/(2m_He) in meV·Å², the prefactor of the kinetic term.
pub fn kinetic_prefactor() -> f64 {
    CONSTANTS.hbar2_over_2m
}

/// Converts a van der Waals coefficient from J·m³ to meV·Å³.
pub fn c3_to_internal(c3_si: f64) -> Result<f64> {
    if !(c3_si > 0.0) || !c3_si.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "C3 must be positive and finite, got {c3_si} J m^3"
        )));
    }
    Ok(c3_si * ANGSTROM_PER_METRE.powi(3) / JOULE_PER_MEV)
}

pub fn mev_to_joule(e_mev: f64) -> f64 {
    e_mev * JOULE_PER_MEV
}

pub fn joule_to_mev(e_joule: f64) -> f64 {
    e_joule / JOULE_PER_MEV
}

/// Kinetic energy (meV) of a particle with wave number `k` (Å⁻¹).
pub fn energy_from_wavenumber(k: f64) -> f64 {
    kinetic_prefactor() * k * k
}

pub fn angstrom_inv_to_nm_inv(k: f64) -> f64 {
    k * NM_INV_PER_ANGSTROM_INV
}

pub fn nm_inv_to_angstrom_inv(k: f64) -> f64 {
    k / NM_INV_PER_ANGSTROM_INV
}
