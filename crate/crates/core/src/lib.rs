//! Coupled-channel quantum threshold reflection of He atoms from flat and
//! periodically structured surfaces.
//!
//! The crate is organized bottom-up: [`units`] holds the constants,
//! [`potential`] the atom–surface interaction and absorber, [`channels`]
//! the diffraction kinematics, [`solver`] the close-coupling propagation and
//! S-matrix extraction, and [`experiment`] the beam model, scans and fits.
//! [`presets`] and [`config`] describe runs.
//!
//! ```no_run
//! use qreflect::experiment::{run_scan, BeamSource};
//! use qreflect::potential::AbsorberParams;
//! use qreflect::presets::Surface;
//!
//! let glass = Surface::preset("glass_slide")?;
//! let beam = BeamSource::new(8.7)?;
//! let scan = run_scan(&glass, &beam, &[0.5e-3, 1e-3, 2e-3], AbsorberParams::default())?;
//! for p in &scan.points {
//!     println!("{:.4} nm^-1  P = {:.4}", p.k_perp, p.p_qr);
//! }
//! # Ok::<(), qreflect::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod potential;
pub mod presets;
pub mod solver;
pub mod units;

pub use error::{Error, Result};
