//! Screened resonance dipole-dipole interaction energies.
//!
//! Computes the interaction energy between a ground-state and an excited
//! oscillator embedded in a dispersive, possibly electrolytic medium, from
//! the field susceptibility tensor through finite-temperature Matsubara
//! sums and zero-temperature imaginary-frequency quadrature, together with
//! the diagnostics (power-law slopes, crossover detection, closed-form
//! asymptotes) needed to map the 1/ρ⁴ → 1/ρ⁷ screening transition.
//!
//! Internal units are Gaussian (cm, erg, rad/s); conversion from nm / eV /
//! mol/L happens once at the configuration boundary ([`config`]).

pub mod analysis;
pub mod config;
pub mod constants;
pub mod curve;
pub mod error;
pub mod media;
pub mod polarizability;
pub mod quadrature;
pub mod resonance;
pub mod susceptibility;

pub use error::{CoreError, Result};
