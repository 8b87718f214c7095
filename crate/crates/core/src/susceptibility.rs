//! Dyadic field-susceptibility tensor T(ρ, ω) between two dipoles on the
//! z-axis.
//!
//! With the inter-dipole axis along z only the diagonal elements survive and
//! T_xx = T_yy, so two values characterize the tensor. Three element sets are
//! implemented verbatim, each with its own sign convention:
//!
//! real axis, free space:
//!   T_xx = (ω²/c² + iω/(ρc) − 1/ρ²) e^{iωρ/c}/ρ
//!   T_zz = 2 (1/ρ² − iω/(ρc)) e^{iωρ/c}/ρ
//!
//! imaginary axis, medium (c = c₀/√ε_w(iξ)):
//!   T_xx = [(ξ/c)² + (ξ/c)/ρ + 1/ρ²] e^{−ξρ/c} / (ρ ε_w)
//!   T_zz = −2 [(ξ/c)/ρ + 1/ρ²] e^{−ξρ/c} / (ρ ε_w)
//!
//! zero frequency, electrolyte:
//!   T⁰_xx = (κ/ρ + 1/ρ²) e^{−κρ} / (ρ ε_w(0))
//!   T⁰_zz = −2 (κ²/2 + κ/ρ + 1/ρ²) e^{−κρ} / (ρ ε_w(0))
//!
//! The two zero-frequency free-space traces vanish identically; the screened
//! static trace is exactly −κ² e^{−κρ}/(ρ ε_w(0)).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C0;
use crate::error::{CoreError, Result};
use crate::media::{eval_epsilon, MediumModel};

/// Exponent beyond which e^{-x} underflows any double-precision result of
/// interest; elements are returned as exact zero with the underflow flag set.
pub const UNDERFLOW_EXPONENT: f64 = 700.0;

/// Which frequency axis an element set was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyTag {
    RealOmega,
    ImaginaryXi,
    StaticScreened,
}

/// The two independent diagonal tensor values at one (ρ, frequency, medium)
/// point, cm^-3.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SusceptibilityDiagonal {
    /// T_xx = T_yy.
    pub t_perp: f64,
    /// T_zz.
    pub t_par: f64,
    /// Separation, cm.
    pub rho: f64,
    pub frequency_tag: FrequencyTag,
    /// Dielectric constant used in the evaluation.
    pub medium_eps: f64,
    /// Exponential factor below double-precision range; elements are exact
    /// zeros.
    pub underflow: bool,
}

impl SusceptibilityDiagonal {
    /// 2 T_xx + T_zz.
    pub fn trace(&self) -> f64 {
        2.0 * self.t_perp + self.t_par
    }
}

/// Complex diagonal elements on the real frequency axis (free space).
#[derive(Debug, Clone, Copy)]
pub struct ComplexSusceptibilityDiagonal {
    pub t_perp: Complex64,
    pub t_par: Complex64,
    pub rho: f64,
}

impl ComplexSusceptibilityDiagonal {
    pub fn trace(&self) -> Complex64 {
        2.0 * self.t_perp + self.t_par
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) {
        return Err(CoreError::domain(format!("rho must be > 0, got {rho:e}")));
    }
    Ok(())
}

/// Real-axis free-space tensor elements, complex valued.
///
/// Evaluated in the scaled variable x = ωρ/c₀: T·ρ³ = (x² + ix − 1)e^{ix} for
/// the transverse element, 2(1 − ix)e^{ix} for the longitudinal one. The
/// imaginary part of T_xx tends to (2/3)ω³/c₀³ as ρ → 0.
pub fn t_real_axis_free_space(rho: f64, omega: f64) -> Result<ComplexSusceptibilityDiagonal> {
    check_rho(rho)?;
    if omega < 0.0 {
        return Err(CoreError::domain("omega must be >= 0".to_string()));
    }
    let x = omega * rho / C0;
    let phase = Complex64::new(0.0, x).exp();
    let inv_rho3 = 1.0 / (rho * rho * rho);
    let t_perp = (Complex64::new(x * x - 1.0, x) * phase) * inv_rho3;
    let t_par = (Complex64::new(2.0, -2.0 * x) * phase) * inv_rho3;
    Ok(ComplexSusceptibilityDiagonal { t_perp, t_par, rho })
}

/// Imaginary-axis tensor elements in a medium, real valued.
pub fn t_imag_axis_medium(rho: f64, xi: f64, medium: &MediumModel) -> Result<SusceptibilityDiagonal> {
    check_rho(rho)?;
    if !(xi > 0.0) {
        return Err(CoreError::domain(format!("xi must be > 0, got {xi:e}")));
    }
    let eps = eval_epsilon(medium, xi)?;
    t_imag_axis_eps(rho, xi, eps)
}

/// Imaginary-axis elements with an explicitly supplied ε(iξ).
pub fn t_imag_axis_eps(rho: f64, xi: f64, eps: f64) -> Result<SusceptibilityDiagonal> {
    check_rho(rho)?;
    if xi < 0.0 {
        return Err(CoreError::domain(format!("xi must be >= 0, got {xi:e}")));
    }
    if !(eps >= 1.0) {
        return Err(CoreError::domain(format!("eps must be >= 1, got {eps}")));
    }
    let kc = xi * eps.sqrt() / C0; // xi / c, cm^-1
    let exponent = kc * rho;
    if exponent > UNDERFLOW_EXPONENT {
        return Ok(SusceptibilityDiagonal {
            t_perp: 0.0,
            t_par: 0.0,
            rho,
            frequency_tag: FrequencyTag::ImaginaryXi,
            medium_eps: eps,
            underflow: true,
        });
    }
    let damp = (-exponent).exp() / (rho * eps);
    let inv_rho = 1.0 / rho;
    let t_perp = (kc * kc + kc * inv_rho + inv_rho * inv_rho) * damp;
    let t_par = -2.0 * (kc * inv_rho + inv_rho * inv_rho) * damp;
    Ok(SusceptibilityDiagonal {
        t_perp,
        t_par,
        rho,
        frequency_tag: FrequencyTag::ImaginaryXi,
        medium_eps: eps,
        underflow: false,
    })
}

/// Zero-frequency electrolyte elements with Debye screening.
pub fn t_static_electrolyte(rho: f64, kappa: f64, eps_static: f64) -> Result<SusceptibilityDiagonal> {
    check_rho(rho)?;
    if kappa < 0.0 {
        return Err(CoreError::domain("kappa must be >= 0".to_string()));
    }
    if !(eps_static >= 1.0) {
        return Err(CoreError::domain("eps_static must be >= 1".to_string()));
    }
    let exponent = kappa * rho;
    if exponent > UNDERFLOW_EXPONENT {
        return Ok(SusceptibilityDiagonal {
            t_perp: 0.0,
            t_par: 0.0,
            rho,
            frequency_tag: FrequencyTag::StaticScreened,
            medium_eps: eps_static,
            underflow: true,
        });
    }
    let damp = (-exponent).exp() / (rho * eps_static);
    let inv_rho = 1.0 / rho;
    let t_perp = (kappa * inv_rho + inv_rho * inv_rho) * damp;
    let t_par = -2.0 * (0.5 * kappa * kappa + kappa * inv_rho + inv_rho * inv_rho) * damp;
    Ok(SusceptibilityDiagonal {
        t_perp,
        t_par,
        rho,
        frequency_tag: FrequencyTag::StaticScreened,
        medium_eps: eps_static,
        underflow: false,
    })
}
