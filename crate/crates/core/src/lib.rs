//! 2D acoustic obstacle scattering and phaseless reverse-time-migration
//! imaging.
//!
//! The crate synthesizes exterior Helmholtz scattering data with a spectral
//! Nystrom boundary-integral solver (sound-soft and impedance obstacles),
//! and reconstructs obstacle boundaries from intensity-only total-field
//! measurements by back-propagating corrected data and cross-correlating
//! with the incident field. A small experiment harness (config files, noise
//! model, metrics, CLI) makes the standard benchmark scenes reproducible.

pub mod dataset;
pub mod error;
pub mod forward;
pub mod harness;
pub mod geometry;
pub mod imaging;
pub mod matrix;
pub mod point;
pub mod specfun;

pub use error::{Error, Result};
pub use point::Point2;

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
