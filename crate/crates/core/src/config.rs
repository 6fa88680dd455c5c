//! Run configuration, stored as TOML.
//!
//! ```toml
//! surface = "glass_slide"
//! temperatures = [8.7, 50.0, 300.0]
//! angles = "0.1:25:60log"
//!
//! [absorber]
//! amplitude = -8.0
//! alpha = 2.0
//! z_i = 0.0
//! enabled = true
//! ```
//!
//! Every field has a default, so an empty file is a valid configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::angle_grid;
use crate::potential::AbsorberParams;
use crate::presets::{Surface, SurfaceSpec};
use crate::solver::Grid;

/// A preset name or an inline surface table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurfaceChoice {
    Preset(String),
    Inline(SurfaceSpec),
}

impl Default for SurfaceChoice {
    fn default() -> Self {
        Self::Preset("glass_slide".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

/// `start:stop:count[log|lin]` in mrad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AngleSpec {
    pub start_mrad: f64,
    pub stop_mrad: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for AngleSpec {
    fn default() -> Self {
        Self {
            start_mrad: 0.1,
            stop_mrad: 25.0,
            count: 60,
            spacing: Spacing::Log,
        }
    }
}

impl AngleSpec {
    /// The grid in rad.
    pub fn angles(&self) -> Vec<f64> {
        angle_grid(
            self.start_mrad * 1e-3,
            self.stop_mrad * 1e-3,
            self.count,
            self.spacing == Spacing::Log,
        )
    }
}

impl FromStr for AngleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("angle grid `{s}` is not start:stop:count[log|lin]"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [start, stop, tail] = parts.as_slice() else {
            return Err(bad());
        };
        let (count, spacing) = if let Some(c) = tail.strip_suffix("log") {
            (c, Spacing::Log)
        } else if let Some(c) = tail.strip_suffix("lin") {
            (c, Spacing::Lin)
        } else {
            (*tail, Spacing::Log)
        };
        let start_mrad: f64 = start.trim().parse().map_err(|_| bad())?;
        let stop_mrad: f64 = stop.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        if !(start_mrad > 0.0 && stop_mrad >= start_mrad && count >= 1)
            || (count > 1 && stop_mrad == start_mrad)
        {
            return Err(Error::Parse(format!(
                "angle grid `{s}` needs 0 < start < stop and count ≥ 1"
            )));
        }
        Ok(Self {
            start_mrad,
            stop_mrad,
            count,
            spacing,
        })
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Lin => "lin",
        };
        write!(
            f,
            "{}:{}:{}{}",
            self.start_mrad, self.stop_mrad, self.count, sp
        )
    }
}

impl TryFrom<String> for AngleSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AngleSpec> for String {
    fn from(a: AngleSpec) -> String {
        a.to_string()
    }
}

/// Everything needed to reproduce a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub surface: SurfaceChoice,
    /// Stagnation temperatures, K.
    pub temperatures: Vec<f64>,
    pub angles: AngleSpec,
    /// Channel truncation; `None` keeps the preset value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub absorber: AbsorberParams,
    pub grid: Grid,
    /// Output directory.
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            surface: SurfaceChoice::default(),
            temperatures: vec![8.7, 50.0, 300.0],
            angles: AngleSpec::default(),
            n_max: None,
            absorber: AbsorberParams::default(),
            grid: Grid::default(),
            out: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// The surface with the configured truncation applied.
    pub fn surface(&self) -> Result<Surface> {
        let s = match &self.surface {
            SurfaceChoice::Preset(name) => Surface::preset(name)?,
            SurfaceChoice::Inline(spec) => Surface::from_spec("custom", spec)?,
        };
        Ok(match self.n_max {
            Some(n) => s.with_n_max(n),
            None => s,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.temperatures.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one temperature is required".into(),
            ));
        }
        if let Some(t) = self
            .temperatures
            .iter()
            .find(|&&t| !(t > 0.0 && t.is_finite()))
        {
            return Err(Error::InvalidParameter(format!(
                "temperature must be positive, got {t} K"
            )));
        }
        self.absorber.validate()?;
        self.surface().map(|_| ())
    }
}
