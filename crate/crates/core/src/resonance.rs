//! Resonance interaction energies and coupled-dipole mode frequencies.
//!
//! The exact zero-temperature energy of the antisymmetric (trapped) state is
//! an integral over imaginary frequencies; the first-order
//! orientation-averaged form used throughout is
//!
//! U(ρ) = −(ħ/2π) ∫₀^∞ dξ α(iξ)* Tr T(ρ, iξ)
//!      = −(ħ/(ρπc₀²)) ∫₀^∞ dξ ξ² α(iξ)* e^{−ξρ/c},
//!
//! since Tr T = 2ξ² e^{−ξρ/c}/(ρc₀²) with c = c₀/√ε_w(iξ). The prefactor is
//! anchored so the vacuum limit reproduces this printed integral exactly; the
//! factor-matching check lives in the test suite.
//!
//! At finite temperature the integral becomes a primed Matsubara sum whose
//! n = 0 term is the classical screened energy
//!
//! U₀(ρ) = −k_B T α(0)* κ_D² e^{−κ_D ρ} / (ρ ε_w(0)) = k_B T α(0)* Tr T⁰,
//!
//! which vanishes identically in free space (zero static trace) and at zero
//! temperature. Signs are anchored to the explicitly negative asymptotes:
//! both the static and the dynamic contributions are attractive for positive
//! excess polarizability.
//!
//! Closed-form asymptotes for the Davies–Ninham electrolyte:
//!
//! small ρ:  U = −(ħc₀/(ρ⁴ π ε₀^{3/2})) ∫ x² e^{−x} α(ixc/ρ)* dx
//!           (→ −2ħc₀α(0)*/(πε₀^{3/2}ρ⁴) for static α*),
//! large ρ:  U = −(2ħc₀⁴ α(0)* η³/(ρ⁷ π ε₀³ ω_p⁶)) ∫ x⁵ e^{−x} dx,
//!
//! with ∫x²e^{−x} = 2 and ∫x⁵e^{−x} = 120, giving the 1/ρ⁴ → 1/ρ⁷ crossover.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{C0, HBAR, K_B};
use crate::error::{CoreError, Result};
use crate::media::{debye_kappa, eval_epsilon, ElectrolyteParams, MediumModel};
use crate::polarizability::{alpha_imag_axis, OscillatorPolarizability};
use crate::quadrature::{
    integrate_semi_infinite, matsubara_sum_integral_tail, Integral, MatsubaraGrid, QuadratureSpec,
};
use crate::susceptibility::{t_real_axis_free_space, t_static_electrolyte};

/// Principal axis of the diagonal susceptibility tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// T_xx = T_yy, perpendicular to the inter-dipole axis.
    Perp,
    /// T_zz, along the inter-dipole axis.
    Par,
}

/// Symmetric/antisymmetric superposition of the shared excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Short-lived symmetric state, root of 1 − αT = 0.
    Symmetric,
    /// Long-lived (trapped) antisymmetric state, root of 1 + αT = 0.
    Antisymmetric,
}

/// The two coupled-dipole mode frequencies at one separation, for one axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModePair {
    /// Symmetric root, rad/s.
    pub omega_plus: f64,
    /// Antisymmetric root, rad/s.
    pub omega_minus: f64,
    /// Separation, cm.
    pub rho: f64,
}

/// Mode pairs for both principal axes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResonanceModes {
    pub perp: ModePair,
    pub par: ModePair,
}

/// Real part of the real-axis tensor element in vacuum or a constant
/// dielectric (c → c₀/√ε, overall 1/ε as in the medium element set).
fn t_real_axis_element(rho: f64, omega: f64, eps: f64, axis: Axis) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    let x = omega * rho * eps.sqrt() / C0;
    let phase = Complex64::new(0.0, x).exp();
    let inv = 1.0 / (rho * rho * rho * eps);
    let val = match axis {
        Axis::Perp => Complex64::new(x * x - 1.0, x) * phase * inv,
        Axis::Par => Complex64::new(2.0, -2.0 * x) * phase * inv,
    };
    Ok(val.re)
}

fn real_axis_eps(medium: &MediumModel) -> Result<f64> {
    match medium {
        MediumModel::Vacuum => Ok(1.0),
        MediumModel::ConstantDielectric { eps, .. } => Ok(*eps),
        _ => Err(CoreError::Usage(
            "real-axis mode solving is defined only for vacuum or constant dielectrics".to_string(),
        )),
    }
}

fn solve_mode(
    rho: f64,
    p: &OscillatorPolarizability,
    eps: f64,
    axis: Axis,
    branch: Branch,
) -> Result<f64> {
    let omega0 = p.omega0;
    let t0 = t_real_axis_element(rho, omega0, eps, axis)?;
    let coupling = p.alpha0 * t0.abs() / (omega0 * omega0);
    if coupling >= 1.0 {
        return Err(CoreError::StrongCoupling { coupling });
    }
    // root of omega^2 = omega0^2 +/- alpha0 T'(rho, omega); + for the
    // antisymmetric branch (1 + alpha T = 0 with alpha = alpha0/(w0^2-w^2))
    let sign = match branch {
        Branch::Antisymmetric => 1.0,
        Branch::Symmetric => -1.0,
    };
    let g = |omega: f64| -> Result<f64> {
        Ok(omega * omega - omega0 * omega0 - sign * p.alpha0 * t_real_axis_element(rho, omega, eps, axis)?)
    };
    // bracket around omega0; the shift is bounded by the coupling
    let delta = (2.0 * coupling).max(1e-14).min(0.5);
    let mut lo = omega0 * (1.0 - delta);
    let mut hi = omega0 * (1.0 + delta);
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    let mut widen = 0;
    while g_lo.signum() == g_hi.signum() && widen < 8 {
        let span = hi - lo;
        lo -= span;
        hi += span;
        if lo <= 0.0 {
            lo = omega0 * 1e-6;
        }
        g_lo = g(lo)?;
        g_hi = g(hi)?;
        widen += 1;
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(CoreError::StrongCoupling { coupling });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 || (hi - lo) < f64::EPSILON * omega0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact real-axis roots of 1 ± α(ω) T_jj(ρ, ω) = 0 near ω₀, per axis.
///
/// Damping is ignored (real roots); the radiative width at the root can be
/// queried separately via `radiation_damping_gamma`.
pub fn resonance_modes(
    rho: f64,
    p: &OscillatorPolarizability,
    medium: &MediumModel,
) -> Result<ResonanceModes> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    let eps = real_axis_eps(medium)?;
    let make = |axis: Axis| -> Result<ModePair> {
        Ok(ModePair {
            omega_plus: solve_mode(rho, p, eps, axis, Branch::Symmetric)?,
            omega_minus: solve_mode(rho, p, eps, axis, Branch::Antisymmetric)?,
            rho,
        })
    };
    Ok(ResonanceModes {
        perp: make(Axis::Perp)?,
        par: make(Axis::Par)?,
    })
}

/// U = ħ[ω_r(ρ) − ω_r(∞)] for the selected branch of one axis.
pub fn energy_from_shift(at_rho: &ModePair, at_inf: &ModePair, branch: Branch) -> f64 {
    match branch {
        Branch::Antisymmetric => HBAR * (at_rho.omega_minus - at_inf.omega_minus),
        Branch::Symmetric => HBAR * (at_rho.omega_plus - at_inf.omega_plus),
    }
}

/// Textbook energy U = p² T_axis(ρ, ω_j) in vacuum on the real axis.
/// Complex in the retarded zone; the real part is the interaction energy.
pub fn textbook_energy(rho: f64, p: &OscillatorPolarizability, axis: Axis) -> Result<Complex64> {
    let t = t_real_axis_free_space(rho, p.omega0)?;
    let p_sq = crate::polarizability::transition_dipole_energy_prefactor(p);
    Ok(match axis {
        Axis::Perp => t.t_perp * p_sq,
        Axis::Par => t.t_par * p_sq,
    })
}

/// Isotropically averaged perturbative-QED transfer-rate shape
/// 3/ρ⁶ + (ω_j/c)²/ρ⁴ + (ω_j/c)⁴/ρ², unnormalized, for curve comparison.
pub fn qed_transfer_rate_shape(rho: f64, omega_j: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    let k = omega_j / C0;
    let r2 = rho * rho;
    Ok(3.0 / (r2 * r2 * r2) + k * k / (r2 * r2) + k.powi(4) / r2)
}

/// Classical zero-frequency (n = 0) screened energy
/// U = −k_B T α(0)* κ_D² e^{−κ_D ρ}/(ρ ε_w(0)), erg.
///
/// κ_D is always recomputed from (N, T) so the explicit k_BT prefactor and
/// the 1/T inside κ_D² stay consistent.
pub fn classical_screened_energy(rho: f64, alpha_star_0: f64, params: &ElectrolyteParams) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    let kappa = debye_kappa(params)?;
    let t0 = t_static_electrolyte(rho, kappa, params.eps_static)?;
    Ok(K_B * params.temperature * alpha_star_0 * t0.trace())
}

/// ε(iξ) for use inside frequency integrals: tabulated media are extended by
/// their boundary values outside the table range (strict range errors remain
/// in force for pointwise `eval_epsilon` queries).
fn eps_for_integral(medium: &MediumModel, xi: f64) -> f64 {
    match medium {
        MediumModel::Tabulated { table, .. } => {
            let (lo, hi) = (table[0].0, table[table.len() - 1].0);
            let x = xi.clamp(lo, hi);
            eval_epsilon(medium, x).unwrap_or(1.0)
        }
        _ => eval_epsilon(medium, xi).unwrap_or(1.0),
    }
}

/// Fully retarded zero-temperature energy by direct quadrature:
/// U = −(ħ/(ρπc₀²)) ∫₀^∞ dξ ξ² α(iξ)* e^{−ξρ√ε(iξ)/c₀}, erg.
///
/// Evaluated in the scaled variable x = ξρ√ε_bg/c₀ (ε_bg the high-frequency
/// background) so the integrand is O(1) across decades of ρ.
pub fn retarded_zero_t_energy(
    rho: f64,
    p: &OscillatorPolarizability,
    medium: &MediumModel,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    let eps_bg = medium.eps_background();
    let scale = C0 / (rho * eps_bg.sqrt()); // xi = scale * x
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let xi = scale * x;
        let eps = eps_for_integral(medium, xi);
        let alpha = alpha_imag_axis(p, xi, C0 / eps.sqrt());
        let exponent = x * (eps / eps_bg).sqrt();
        if exponent > crate::susceptibility::UNDERFLOW_EXPONENT {
            return 0.0;
        }
        x * x * alpha * (-exponent).exp()
    };
    let integral: Integral = integrate_semi_infinite(integrand, spec)?;
    Ok(-HBAR * C0 / (std::f64::consts::PI * rho.powi(4) * eps_bg.powf(1.5)) * integral.value)
}

/// Result of an asymptotic expression together with its validity check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymptoteValue {
    pub u: f64,
    /// False when the separation is outside the asymptote's regime of
    /// validity.
    pub in_regime: bool,
}

/// Small-separation form U = −(ħc₀/(ρ⁴πε₀^{3/2})) ∫ x² e^{−x} α(ixc/ρ)* dx,
/// valid while the relevant frequencies stay far above the ionic plasma
/// frequency (ρ ω_p/c₀ ≲ 0.1; pass `omega_p` to have that checked).
pub fn small_rho_asymptote(
    rho: f64,
    p: &OscillatorPolarizability,
    eps0: f64,
    spec: &QuadratureSpec,
    omega_p: Option<f64>,
) -> Result<AsymptoteValue> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    if !(eps0 >= 1.0) {
        return Err(CoreError::domain("eps0 must be >= 1".to_string()));
    }
    let c = C0 / eps0.sqrt();
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        x * x * (-x).exp() * alpha_imag_axis(p, x * c / rho, c)
    };
    let integral = integrate_semi_infinite(integrand, spec)?;
    let u = -HBAR * C0 / (rho.powi(4) * std::f64::consts::PI * eps0.powf(1.5)) * integral.value;
    let in_regime = match omega_p {
        Some(wp) => rho * wp / C0 <= 0.1,
        None => true,
    };
    Ok(AsymptoteValue { u, in_regime })
}

/// Large-separation electrolyte asymptote
/// U = −(2ħc₀⁴ α(0)* η³/(ρ⁷ π ε₀³ ω_p⁶)) · 120, erg.
pub fn large_rho_asymptote(rho: f64, alpha_star_0: f64, medium: &MediumModel) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    match medium {
        MediumModel::DaviesNinham {
            eps_background,
            omega_p,
            eta,
            ..
        } => {
            if *omega_p <= 0.0 {
                return Err(CoreError::Usage(
                    "large-rho asymptote needs omega_p > 0".to_string(),
                ));
            }
            // ∫ x^5 e^{-x} dx = Γ(6) = 120
            const X5_KERNEL: f64 = 120.0;
            Ok(-2.0 * HBAR * C0.powi(4) * alpha_star_0 * eta.powi(3) * X5_KERNEL
                / (rho.powi(7) * std::f64::consts::PI * eps_background.powi(3) * omega_p.powi(6)))
        }
        _ => Err(CoreError::Usage(
            "large-rho asymptote is defined for the Davies-Ninham medium".to_string(),
        )),
    }
}

/// Expansion order of the finite-temperature energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyOrder {
    /// Linear-in-αT trace terms; the n = 0 term is exactly the classical
    /// screened energy.
    First,
    /// Per-axis logarithm Σ_j ln(1 + αT_jj) with the antisymmetric branch
    /// sign convention.
    FullLog,
}

/// Finite-temperature energy split into its Matsubara parts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FiniteTEnergy {
    /// Total energy, erg.
    pub total: f64,
    /// n = 0 (classical screened) part, erg.
    pub n0_part: f64,
    /// Sum over n >= 1 plus tail closure, erg.
    pub dynamic_part: f64,
    /// Highest Matsubara index summed explicitly.
    pub n_used: usize,
}

/// Finite-temperature resonance energy over the primed Matsubara sum.
///
/// The n = 0 term uses the screened static tensor, the n ≥ 1 terms the
/// imaginary-axis medium tensor. At first order the orientational average
/// runs through the tensor trace; signs follow the convention in the module
/// docs (all contributions attractive for α* > 0).
pub fn finite_t_energy(
    rho: f64,
    p: &OscillatorPolarizability,
    medium: &MediumModel,
    params: &ElectrolyteParams,
    grid: &MatsubaraGrid,
    order: EnergyOrder,
    spec: &QuadratureSpec,
) -> Result<FiniteTEnergy> {
    if !(rho > 0.0) {
        return Err(CoreError::domain("rho must be > 0".to_string()));
    }
    if (grid.temperature - params.temperature).abs() > 1e-9 * params.temperature {
        return Err(CoreError::Usage(
            "MatsubaraGrid and ElectrolyteParams temperatures differ".to_string(),
        ));
    }
    let eps0 = medium.eps_static();
    if (eps0 - params.eps_static).abs() > 1e-9 * eps0 {
        return Err(CoreError::Usage(
            "medium and electrolyte static dielectric constants differ".to_string(),
        ));
    }
    let kappa = debye_kappa(params)?;
    let t0 = t_static_electrolyte(rho, kappa, eps0)?;
    let alpha_static = p.alpha_static();

    // weak-coupling guard for the logarithmic branch
    if order == EnergyOrder::FullLog {
        let worst = alpha_static * t0.t_perp.abs().max(t0.t_par.abs());
        if worst >= 0.99 {
            return Err(CoreError::StrongCoupling { coupling: worst });
        }
    }

    let n0_term = match order {
        EnergyOrder::First => 2.0 * alpha_static * t0.trace(),
        EnergyOrder::FullLog => {
            2.0 * (2.0 * (1.0 + alpha_static * t0.t_perp).ln()
                + (1.0 + alpha_static * t0.t_par).ln())
        }
    };

    let g = |xi: f64| -> f64 {
        if xi <= 0.0 {
            return 0.0;
        }
        let eps = eps_for_integral(medium, xi);
        let c = C0 / eps.sqrt();
        let alpha = alpha_imag_axis(p, xi, c);
        match crate::susceptibility::t_imag_axis_eps(rho, xi, eps) {
            Ok(t) if !t.underflow => match order {
                EnergyOrder::First => -alpha * t.trace(),
                EnergyOrder::FullLog => {
                    let a_perp = 1.0 + alpha * t.t_perp;
                    let a_par = 1.0 + alpha * t.t_par;
                    if a_perp <= 0.0 || a_par <= 0.0 {
                        return 0.0;
                    }
                    -(2.0 * a_perp.ln() + a_par.ln())
                }
            },
            _ => 0.0,
        }
    };

    let sum = matsubara_sum_integral_tail(n0_term, g, grid, spec)?;
    let kb_t = K_B * params.temperature;
    let n0_part = kb_t * 0.5 * n0_term;
    let total = kb_t * sum.value;
    Ok(FiniteTEnergy {
        total,
        n0_part,
        dynamic_part: total - n0_part,
        n_used: sum.n_used,
    })
}
