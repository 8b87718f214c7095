//! Lorentz-oscillator excess polarizability of a single atom.
//!
//! The oscillator is characterized by the strength parameter α₀ = fe²/m
//! (cm³ (rad/s)²) and resonance frequency ω₀, giving
//!
//! α(ω)  = α₀ / (ω₀² − ω² − iωγ(ω))      on the real axis,
//! α(iξ) = α₀ / (ω₀² + ξ²)               on the imaginary axis (no damping),
//!
//! with static limit α(0) = α₀/ω₀² and radiation damping
//! γ(ω) = (2/3) α₀ ω² / c³.

use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{CoreError, Result};

/// How the self-field damping term is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DampingMode {
    /// No dissipation; α(iξ) is purely real. Used by every imaginary-axis
    /// integral representation.
    None,
    /// Radiation damping γ(ω) = (2/3)α₀ω²/c³, used only in real-axis
    /// diagnostics.
    Radiation,
}

/// Frequency dependence of the excess polarizability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaProfile {
    /// Full Lorentz dispersion α₀/(ω₀² + ξ²).
    Lorentz,
    /// Static limit α(iξ) ≡ α(0) = α₀/ω₀² at every frequency. Used when the
    /// excess polarizability is approximated by its static value.
    StaticLimit,
}

/// Single-oscillator (excess) polarizability of one atom.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OscillatorPolarizability {
    /// Oscillator strength parameter α₀ = fe²/m, cm³ (rad/s)².
    pub alpha0: f64,
    /// Resonance frequency ω₀, rad/s.
    pub omega0: f64,
    pub damping_mode: DampingMode,
    pub profile: AlphaProfile,
}

impl OscillatorPolarizability {
    pub fn new(alpha0: f64, omega0: f64, damping_mode: DampingMode, profile: AlphaProfile) -> Result<Self> {
        if alpha0 <= 0.0 {
            return Err(CoreError::domain("alpha0 must be > 0".to_string()));
        }
        if omega0 <= 0.0 {
            return Err(CoreError::domain("omega0 must be > 0".to_string()));
        }
        Ok(OscillatorPolarizability {
            alpha0,
            omega0,
            damping_mode,
            profile,
        })
    }

    /// Undamped Lorentz oscillator.
    pub fn lorentz(alpha0: f64, omega0: f64) -> Result<Self> {
        Self::new(alpha0, omega0, DampingMode::None, AlphaProfile::Lorentz)
    }

    /// Oscillator frozen at its static polarizability α(0) = alpha_static
    /// (cm³). `omega0` still sets the resonance used by the mode solver.
    pub fn static_excess(alpha_static: f64, omega0: f64) -> Result<Self> {
        Self::new(
            alpha_static * omega0 * omega0,
            omega0,
            DampingMode::None,
            AlphaProfile::StaticLimit,
        )
    }

    /// Static polarizability α(0) = α₀/ω₀², cm³.
    pub fn alpha_static(&self) -> f64 {
        self.alpha0 / (self.omega0 * self.omega0)
    }
}

/// Evaluate α(iξ) on the imaginary axis, cm³.
///
/// With `DampingMode::None` this is α₀/(ω₀²+ξ²): positive, even in ξ and
/// strictly decreasing for ξ > 0. With radiation damping the continuation
/// ω → iξ contributes an extra +ξγ(iξ-convention) term kept real.
pub fn alpha_imag_axis(p: &OscillatorPolarizability, xi: f64, medium_c: f64) -> f64 {
    match p.profile {
        AlphaProfile::StaticLimit => p.alpha_static(),
        AlphaProfile::Lorentz => {
            let denom = match p.damping_mode {
                DampingMode::None => p.omega0 * p.omega0 + xi * xi,
                DampingMode::Radiation => {
                    p.omega0 * p.omega0 + xi * xi + xi * radiation_damping_gamma(p, xi, medium_c)
                }
            };
            p.alpha0 / denom
        }
    }
}

/// Undamped real-axis polarizability α(ω) = α₀/(ω₀²−ω²), cm³.
///
/// Diverges at ω = ω₀; callers (the mode solver) bracket roots away from the
/// pole.
pub fn alpha_real_axis_undamped(p: &OscillatorPolarizability, omega: f64) -> f64 {
    match p.profile {
        AlphaProfile::StaticLimit => p.alpha_static(),
        AlphaProfile::Lorentz => p.alpha0 / (p.omega0 * p.omega0 - omega * omega),
    }
}

/// Radiation damping strength γ(ω) = (2/3) α₀ ω² / c³, rad/s.
pub fn radiation_damping_gamma(p: &OscillatorPolarizability, omega: f64, medium_c: f64) -> f64 {
    2.0 / 3.0 * p.alpha0 * omega * omega / (medium_c * medium_c * medium_c)
}

/// Squared transition dipole moment p² mapping the oscillator onto the
/// textbook energy U = p² T(ρ, ω_j), erg cm³.
///
/// Convention: p² ≡ ħ α₀ / (2 ω_j), fixed so that ħ times the first-order
/// frequency shift α₀T/(2ω_j) equals p²T.
pub fn transition_dipole_energy_prefactor(p: &OscillatorPolarizability) -> f64 {
    HBAR * p.alpha0 / (2.0 * p.omega0)
}
