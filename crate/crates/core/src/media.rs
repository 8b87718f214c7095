//! Dielectric response of the embedding medium and derived electrolyte scales.
//!
//! The medium enters the interaction through its imaginary-axis response
//! ε(iξ) and, for electrolytes, through the inverse Debye length
//!
//! κ_D = sqrt(8π N e² / (ε_w(0) k_B T))
//!
//! in Gaussian units with N the per-species number density of a 1:1 salt.
//! The Davies–Ninham electrolyte model reads
//!
//! ε_w(iξ) = ε₀ (1 + ω_p² / (ξ(ξ + η)))
//!
//! which tends to ε₀ at high frequency and to ε₀ω_p²/(ξη) at low frequency.

use serde::{Deserialize, Serialize};

use crate::constants::{C0, E_CHARGE, K_B};
use crate::error::{CoreError, Result};

/// Dielectric model of the background medium, evaluated on the imaginary axis.
///
/// The static (ξ = 0) response of an electrolyte is never obtained by
/// evaluating these models at ξ = 0; it is carried separately by
/// [`MediumModel::eps_static`] together with Debye screening in the
/// zero-frequency susceptibility tensor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum MediumModel {
    /// Free space: ε(iξ) = 1 for all ξ.
    Vacuum,
    /// Frequency-independent dielectric ε(iξ) = eps.
    ConstantDielectric { eps: f64, eps_static: f64 },
    /// Davies–Ninham electrolyte response ε₀(1 + ω_p²/(ξ(ξ+η))).
    DaviesNinham {
        eps_background: f64,
        eps_static: f64,
        /// Ionic plasma frequency, rad/s.
        omega_p: f64,
        /// Ionic collision frequency, rad/s. Never given numerically in the
        /// underlying model; always a user input.
        eta: f64,
    },
    /// Piecewise log-log interpolated table of (ξ [rad/s], ε(iξ)) samples,
    /// ascending in ξ.
    Tabulated {
        eps_static: f64,
        table: Vec<(f64, f64)>,
    },
}

impl MediumModel {
    pub fn vacuum() -> Self {
        MediumModel::Vacuum
    }

    pub fn constant(eps: f64) -> Result<Self> {
        if eps < 1.0 {
            return Err(CoreError::domain(format!("eps = {eps} must be >= 1")));
        }
        Ok(MediumModel::ConstantDielectric {
            eps,
            eps_static: eps,
        })
    }

    pub fn davies_ninham(eps_background: f64, eps_static: f64, omega_p: f64, eta: f64) -> Result<Self> {
        if eps_background < 1.0 || eps_static < 1.0 {
            return Err(CoreError::domain(
                "eps_background and eps_static must be >= 1".to_string(),
            ));
        }
        if omega_p < 0.0 {
            return Err(CoreError::domain("omega_p must be >= 0".to_string()));
        }
        if eta <= 0.0 {
            return Err(CoreError::domain("eta must be > 0".to_string()));
        }
        Ok(MediumModel::DaviesNinham {
            eps_background,
            eps_static,
            omega_p,
            eta,
        })
    }

    /// Build a tabulated medium. The table must be ascending in ξ with
    /// positive, non-increasing ε (imaginary-axis response of a passive
    /// medium).
    pub fn tabulated(eps_static: f64, table: Vec<(f64, f64)>) -> Result<Self> {
        if eps_static < 1.0 {
            return Err(CoreError::domain("eps_static must be >= 1".to_string()));
        }
        if table.len() < 2 {
            return Err(CoreError::domain(
                "tabulated medium needs at least 2 samples".to_string(),
            ));
        }
        for w in table.windows(2) {
            let (x0, e0) = w[0];
            let (x1, e1) = w[1];
            if !(x0 > 0.0 && x1 > x0) {
                return Err(CoreError::domain(
                    "table xi values must be positive and strictly ascending".to_string(),
                ));
            }
            if !(e0 > 0.0 && e1 > 0.0) {
                return Err(CoreError::domain(
                    "table eps values must be positive".to_string(),
                ));
            }
            if e1 > e0 {
                return Err(CoreError::domain(
                    "table eps must be non-increasing in xi".to_string(),
                ));
            }
        }
        Ok(MediumModel::Tabulated { eps_static, table })
    }

    /// Static dielectric constant ε_w(0) used in the screened zero-frequency
    /// tensor elements.
    pub fn eps_static(&self) -> f64 {
        match self {
            MediumModel::Vacuum => 1.0,
            MediumModel::ConstantDielectric { eps_static, .. } => *eps_static,
            MediumModel::DaviesNinham { eps_static, .. } => *eps_static,
            MediumModel::Tabulated { eps_static, .. } => *eps_static,
        }
    }

    /// High-frequency background constant (the value ε(iξ) approaches as
    /// ξ → ∞), used by the small-separation asymptote.
    pub fn eps_background(&self) -> f64 {
        match self {
            MediumModel::Vacuum => 1.0,
            MediumModel::ConstantDielectric { eps, .. } => *eps,
            MediumModel::DaviesNinham { eps_background, .. } => *eps_background,
            MediumModel::Tabulated { table, .. } => table.last().map(|&(_, e)| e).unwrap_or(1.0),
        }
    }
}

/// Evaluate ε(iξ) for the given medium.
///
/// For the Davies–Ninham model ξ must be strictly positive (the form
/// diverges at ξ = 0; static response is handled separately).
pub fn eval_epsilon(medium: &MediumModel, xi: f64) -> Result<f64> {
    match medium {
        MediumModel::Vacuum => Ok(1.0),
        MediumModel::ConstantDielectric { eps, .. } => Ok(*eps),
        MediumModel::DaviesNinham {
            eps_background,
            omega_p,
            eta,
            ..
        } => {
            if xi <= 0.0 {
                return Err(CoreError::domain(format!(
                    "davies_ninham requires xi > 0, got {xi:e}"
                )));
            }
            Ok(eps_background * (1.0 + omega_p * omega_p / (xi * (xi + eta))))
        }
        MediumModel::Tabulated { table, .. } => {
            let (lo, hi) = (table[0].0, table[table.len() - 1].0);
            if xi < lo || xi > hi {
                return Err(CoreError::Extrapolation { xi, lo, hi });
            }
            // log-linear interpolation in (log xi, log eps): dielectric data
            // spans decades.
            let idx = table.partition_point(|&(x, _)| x < xi);
            if idx == 0 {
                return Ok(table[0].1);
            }
            let (x0, e0) = table[idx - 1];
            if xi == x0 {
                return Ok(e0);
            }
            let (x1, e1) = table[idx.min(table.len() - 1)];
            if x1 == x0 {
                return Ok(e0);
            }
            let t = (xi.ln() - x0.ln()) / (x1.ln() - x0.ln());
            Ok((e0.ln() * (1.0 - t) + e1.ln() * t).exp())
        }
    }
}

/// Phase velocity of light in the medium at imaginary frequency ξ,
/// c = c₀/√ε(iξ), in cm/s.
pub fn medium_light_speed(medium: &MediumModel, xi: f64) -> Result<f64> {
    Ok(C0 / eval_epsilon(medium, xi)?.sqrt())
}

/// Electrolyte composition for Debye screening and frequency-scale checks.
///
/// `ionic_concentration` is the per-species number density of a 1:1 salt,
/// in cm^-3 (Gaussian-units convention for κ_D² = 8πNe²/(εk_BT)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElectrolyteParams {
    /// Per-species ion number density N, cm^-3.
    pub ionic_concentration: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Static dielectric constant ε_w(0) of the solvent.
    pub eps_static: f64,
    /// Ion mass, g. Used only in the plasma-frequency sanity report.
    pub ion_mass: f64,
}

impl ElectrolyteParams {
    pub fn new(ionic_concentration: f64, temperature: f64, eps_static: f64, ion_mass: f64) -> Result<Self> {
        if ionic_concentration < 0.0 {
            return Err(CoreError::domain("ionic concentration must be >= 0".to_string()));
        }
        if temperature <= 0.0 {
            return Err(CoreError::domain("temperature must be > 0".to_string()));
        }
        if eps_static < 1.0 {
            return Err(CoreError::domain("eps_static must be >= 1".to_string()));
        }
        if ion_mass <= 0.0 {
            return Err(CoreError::domain("ion mass must be > 0".to_string()));
        }
        Ok(ElectrolyteParams {
            ionic_concentration,
            temperature,
            eps_static,
            ion_mass,
        })
    }
}

/// Inverse Debye length κ_D = sqrt(8πNe²/(ε_w(0)k_BT)) in cm^-1.
pub fn debye_kappa(params: &ElectrolyteParams) -> Result<f64> {
    if params.ionic_concentration < 0.0 {
        return Err(CoreError::domain("ionic concentration must be >= 0".to_string()));
    }
    let n = params.ionic_concentration;
    let kappa_sq = 8.0 * std::f64::consts::PI * n * E_CHARGE * E_CHARGE
        / (params.eps_static * K_B * params.temperature);
    Ok(kappa_sq.sqrt())
}

/// First Matsubara frequency, ionic plasma frequency, and their ratio.
///
/// ξ₁ = 2π k_B T / ħ; ω_p = sqrt(4πNe²/m_ion). For biological salt
/// concentrations ξ₁ is of order 10^14 rad/s while the ionic plasma
/// frequency is ~10^12 rad/s, so the ionic plasma has relaxed at every
/// nonzero Matsubara frequency.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrequencyScaleReport {
    /// First nonzero Matsubara frequency, rad/s.
    pub xi_1: f64,
    /// Ionic plasma frequency, rad/s.
    pub omega_plasma_ionic: f64,
    /// omega_plasma_ionic / xi_1.
    pub ratio: f64,
}

pub fn frequency_scale_report(params: &ElectrolyteParams) -> Result<FrequencyScaleReport> {
    let xi_1 = 2.0 * std::f64::consts::PI * K_B * params.temperature / crate::constants::HBAR;
    let omega_plasma_ionic = (4.0 * std::f64::consts::PI
        * params.ionic_concentration
        * E_CHARGE
        * E_CHARGE
        / params.ion_mass)
        .sqrt();
    Ok(FrequencyScaleReport {
        xi_1,
        omega_plasma_ionic,
        ratio: omega_plasma_ionic / xi_1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{mol_per_l_to_cm3, AMU};

    fn dn(eps0: f64, omega_p: f64, eta: f64) -> MediumModel {
        MediumModel::davies_ninham(eps0, 78.5, omega_p, eta).unwrap()
    }

    #[test]
    fn vacuum_is_unity() {
        for xi in [1.0, 1e10, 1e16] {
            assert_eq!(eval_epsilon(&MediumModel::Vacuum, xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn davies_ninham_at_plasma_frequency() {
        // eps0 = 1, eta -> 0: eps(i omega_p) = 1 + omega_p^2/omega_p^2 = 2
        let m = dn(1.0, 1e12, 1e-3);
        let eps = eval_epsilon(&m, 1e12).unwrap();
        assert!((eps - 2.0).abs() < 1e-9, "eps = {eps}");
    }

    #[test]
    fn davies_ninham_high_frequency_limit() {
        let (eps0, omega_p, eta) = (1.7, 2e12, 1e11);
        let m = dn(eps0, omega_p, eta);
        let xi = 1e4 * omega_p.max(eta);
        let eps = eval_epsilon(&m, xi).unwrap();
        assert!((eps / eps0 - 1.0).abs() < 1e-7, "eps = {eps}");
        // first-order correction omega_p^2/xi^2 at moderate xi
        let xi = 100.0 * omega_p;
        let eps = eval_epsilon(&m, xi).unwrap();
        let first_order = eps0 * (1.0 + omega_p * omega_p / (xi * xi));
        assert!((eps / first_order - 1.0).abs() < 1e-2);
    }

    #[test]
    fn davies_ninham_low_frequency_limit() {
        let (eps0, omega_p, eta) = (1.7, 2e12, 1e11);
        let m = dn(eps0, omega_p, eta);
        let xi = 1e-6 * eta; // xi << eta and xi*eta << omega_p^2
        let eps = eval_epsilon(&m, xi).unwrap();
        let limit = eps0 * omega_p * omega_p / (xi * eta);
        assert!((eps / limit - 1.0).abs() < 2e-5, "eps/limit = {}", eps / limit);
    }

    #[test]
    fn davies_ninham_rejects_nonpositive_xi() {
        let m = dn(1.0, 1e12, 1e11);
        assert!(eval_epsilon(&m, 0.0).is_err());
        assert!(eval_epsilon(&m, -1.0).is_err());
    }

    #[test]
    fn davies_ninham_monotone_decreasing_bounded_below() {
        let m = dn(1.3, 3e12, 5e10);
        let mut prev = f64::INFINITY;
        for k in 0..60 {
            let xi = 1e6 * 10f64.powf(k as f64 * 0.2);
            let eps = eval_epsilon(&m, xi).unwrap();
            assert!(eps < prev, "not decreasing at xi = {xi:e}");
            assert!(eps > 1.3, "below background at xi = {xi:e}");
            prev = eps;
        }
    }

    #[test]
    fn tabulated_interpolation_and_range() {
        let table = vec![(1e10, 64.0), (1e12, 8.0), (1e14, 1.0)];
        let m = MediumModel::tabulated(78.5, table).unwrap();
        // exact at nodes
        assert!((eval_epsilon(&m, 1e12).unwrap() - 8.0).abs() < 1e-12);
        // log-log midpoint of (1e10, 64) and (1e12, 8) is (1e11, sqrt(64*8))
        let mid = eval_epsilon(&m, 1e11).unwrap();
        assert!((mid - (64.0f64 * 8.0).sqrt()).abs() < 1e-9);
        assert!(matches!(
            eval_epsilon(&m, 1e9),
            Err(CoreError::Extrapolation { .. })
        ));
        assert!(eval_epsilon(&m, 1e15).is_err());
    }

    #[test]
    fn tabulated_rejects_increasing_eps() {
        assert!(MediumModel::tabulated(78.5, vec![(1e10, 2.0), (1e12, 3.0)]).is_err());
    }

    #[test]
    fn light_speed_in_media() {
        assert_eq!(medium_light_speed(&MediumModel::Vacuum, 1e12).unwrap(), C0);
        let m = MediumModel::constant(4.0).unwrap();
        assert!((medium_light_speed(&m, 1e12).unwrap() - C0 / 2.0).abs() < 1e-6);
        // davies_ninham, eps0 = 1, xi = 1e3 omega_p: c within 1e-6 of c0
        let m = dn(1.0, 1e12, 1e10);
        let c = medium_light_speed(&m, 1e15).unwrap();
        assert!((c / C0 - 1.0).abs() < 1e-6);
        assert!(c <= C0);
    }

    #[test]
    fn debye_kappa_zero_concentration() {
        let p = ElectrolyteParams::new(0.0, 298.0, 78.5, 23.0 * AMU).unwrap();
        assert_eq!(debye_kappa(&p).unwrap(), 0.0);
    }

    #[test]
    fn debye_kappa_sqrt_scaling() {
        let p1 = ElectrolyteParams::new(1e19, 298.0, 78.5, 23.0 * AMU).unwrap();
        let p2 = ElectrolyteParams::new(2e19, 298.0, 78.5, 23.0 * AMU).unwrap();
        let r = debye_kappa(&p2).unwrap() / debye_kappa(&p1).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn debye_length_tenth_molar() {
        // Hand oracle in Gaussian units for 0.1 M, 298 K, eps = 78.5:
        //   N  = 0.1 * N_A / 1000 = 6.0221e19 cm^-3
        //   k² = 8π N e² / (ε k_B T) = 1.0811e14 cm^-2
        //   λ_D = 1/κ = 9.62e-8 cm = 0.962 nm
        let n = mol_per_l_to_cm3(0.1);
        let p = ElectrolyteParams::new(n, 298.0, 78.5, 23.0 * AMU).unwrap();
        let lambda_nm = 1e7 / debye_kappa(&p).unwrap();
        assert!((lambda_nm - 0.96).abs() / 0.96 < 0.02, "lambda_D = {lambda_nm} nm");
    }

    #[test]
    fn frequency_scales_match_footnote_orders() {
        let n = mol_per_l_to_cm3(0.1);
        let p = ElectrolyteParams::new(n, 300.0, 78.5, 22.99 * AMU).unwrap();
        let r = frequency_scale_report(&p).unwrap();
        assert!((r.xi_1 / 2.47e14 - 1.0).abs() < 0.01, "xi_1 = {:e}", r.xi_1);
        assert!(r.omega_plasma_ionic > 1e12 && r.omega_plasma_ionic < 1e13);
        assert!(r.ratio < 0.1);
        // xi_1 linear in T
        let p2 = ElectrolyteParams::new(n, 600.0, 78.5, 22.99 * AMU).unwrap();
        let r2 = frequency_scale_report(&p2).unwrap();
        assert!((r2.xi_1 / r.xi_1 - 2.0).abs() < 1e-12);
    }
}
