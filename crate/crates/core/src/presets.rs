//! Named surfaces.
//!
//! The parameter table lives in `data/surfaces.toml` and is compiled into
//! the crate. A [`SurfaceSpec`] is the serializable description; a
//! [`Surface`] is the resolved potential plus optional grating.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{CouplingConvention, Grating, SurfacePotential};

const SURFACES_TOML: &str = include_str!("../data/surfaces.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GratingSpec {
    /// Strip width, Å.
    pub a: f64,
    /// Period, Å.
    pub d: f64,
    pub n_max: usize,
    #[serde(default)]
    pub coupling_convention: CouplingConvention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub label: String,
    /// Morse range parameter χ, Å⁻¹.
    pub chi: f64,
    /// van der Waals coefficient, J·m³.
    pub c3_si: f64,
    /// Retardation length, Å.
    pub l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grating: Option<GratingSpec>,
}

/// A surface ready for scattering calculations.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub name: String,
    pub label: String,
    pub potential: SurfacePotential,
    pub grating: Option<Grating>,
}

impl Surface {
    pub fn from_spec(name: &str, spec: &SurfaceSpec) -> Result<Self> {
        let potential = SurfacePotential::from_si(spec.chi, spec.c3_si, spec.l)?;
        let grating = spec
            .grating
            .as_ref()
            .map(|g| Grating::new(g.a, g.d, g.n_max, g.coupling_convention))
            .transpose()?;
        Ok(Self {
            name: name.to_owned(),
            label: spec.label.clone(),
            potential,
            grating,
        })
    }

    /// Looks up a built-in preset.
    pub fn preset(name: &str) -> Result<Self> {
        let specs = preset_specs();
        let spec = specs.get(name).ok_or_else(|| Error::UnknownPreset {
            name: name.to_owned(),
            available: preset_names().join(", "),
        })?;
        Self::from_spec(name, spec)
    }

    pub fn is_flat(&self) -> bool {
        self.grating.is_none()
    }

    /// Grating period in Å, if any.
    pub fn period(&self) -> Option<f64> {
        self.grating.map(|g| g.d)
    }

    /// Channel truncation order (0 on a flat surface).
    pub fn n_max(&self) -> usize {
        self.grating.map_or(0, |g| g.n_max)
    }

    /// Same surface with a different channel truncation; no effect when flat.
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        if let Some(g) = self.grating.as_mut() {
            g.n_max = n_max;
        }
        self
    }
}

/// All built-in presets keyed by name.
pub fn preset_specs() -> BTreeMap<String, SurfaceSpec> {
    toml::from_str(SURFACES_TOML).expect("embedded surface table is valid")
}

pub fn preset_names() -> Vec<String> {
    preset_specs().into_keys().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve() {
        let names = preset_names();
        assert_eq!(
            names,
            ["flat_cr", "gaas_wafer", "glass_slide", "structured_cr"]
        );
        for n in &names {
            let s = Surface::preset(n).unwrap();
            assert_eq!(s.is_flat(), n != "structured_cr");
            assert_eq!(s.potential.chi, 0.5);
            assert_eq!(s.potential.l, 93.0);
        }
    }

    #[test]
    fn structured_cr_grating() {
        let s = Surface::preset("structured_cr").unwrap();
        let g = s.grating.unwrap();
        assert_eq!((g.a, g.d, g.n_max), (1.0e5, 2.0e5, 10));
        assert_eq!(g.coupling_convention, CouplingConvention::Normalized);
        assert_eq!(s.clone().with_n_max(20).n_max(), 20);
        assert_eq!(
            Surface::preset("glass_slide")
                .unwrap()
                .with_n_max(20)
                .n_max(),
            0
        );
    }

    #[test]
    fn wafer_is_deeper_than_glass() {
        let glass = Surface::preset("glass_slide").unwrap();
        let wafer = Surface::preset("gaas_wafer").unwrap();
        assert!(wafer.potential.d_well > glass.potential.d_well);
        assert_eq!(
            glass.potential,
            Surface::preset("flat_cr").unwrap().potential
        );
    }

    #[test]
    fn unknown_preset_lists_names() {
        match Surface::preset("graphite") {
            Err(Error::UnknownPreset { available, .. }) => {
                assert_eq!(available, "flat_cr, gaas_wafer, glass_slide, structured_cr")
            }
            other => panic!("{other:?}"),
        }
    }
}
