//! Curve diagnostics: local power-law slopes, crossover localization between
//! asymptotic regimes, and asymptote-vs-exact deviation reports.

use serde::{Deserialize, Serialize};

use crate::curve::{EnergyCurve, PointFlag};
use crate::error::{CoreError, Result};

/// Local d ln|U| / d ln ρ along a curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeProfile {
    /// Separations of the interior points where a slope is defined, cm.
    pub rho: Vec<f64>,
    /// Centered least-squares slope per point.
    pub local_slope: Vec<f64>,
    /// Points per fit window.
    pub window: usize,
    /// Interior points skipped because U changed sign or carried flags
    /// inside the window.
    pub skipped: usize,
}

/// Centered least-squares slope in (ln ρ, ln |U|) per interior point.
///
/// Windows containing sign changes, zeros or flagged points are skipped.
/// Exact on pure power laws for any window size on a log grid.
pub fn local_loglog_slope(curve: &EnergyCurve, window: usize) -> Result<SlopeProfile> {
    if window < 3 || window % 2 == 0 {
        return Err(CoreError::Usage(format!(
            "window must be an odd count >= 3, got {window}"
        )));
    }
    if curve.len() < window {
        return Err(CoreError::Usage(format!(
            "curve has {} points, window needs {window}",
            curve.len()
        )));
    }
    let half = window / 2;
    let mut rho = Vec::new();
    let mut slope = Vec::new();
    let mut skipped = 0;
    for i in half..curve.len() - half {
        let idx = i - half..=i + half;
        let usable = idx.clone().all(|j| {
            curve.flags[j] == PointFlag::Ok
                && curve.u_values[j] != 0.0
                && curve.u_values[j].signum() == curve.u_values[i].signum()
        });
        if !usable {
            skipped += 1;
            continue;
        }
        // least squares for ln|U| = a + s ln(rho)
        let xs: Vec<f64> = idx.clone().map(|j| curve.rho_grid[j].ln()).collect();
        let ys: Vec<f64> = idx.map(|j| curve.u_values[j].abs().ln()).collect();
        let n = xs.len() as f64;
        let x_mean = xs.iter().sum::<f64>() / n;
        let y_mean = ys.iter().sum::<f64>() / n;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - x_mean) * (y - y_mean);
            sxx += (x - x_mean) * (x - x_mean);
        }
        rho.push(curve.rho_grid[i]);
        slope.push(sxy / sxx);
    }
    Ok(SlopeProfile {
        rho,
        local_slope: slope,
        window,
        skipped,
    })
}

/// Crossover separation detected between two slope plateaus.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Crossover {
    /// ρ* where the local slope crosses (s1 + s2)/2, cm.
    pub rho_star: f64,
    /// Slope plateau attained at the small-ρ end.
    pub attained_s1: f64,
    /// Slope plateau attained at the large-ρ end.
    pub attained_s2: f64,
}

/// Locate the single crossover between slope plateaus s1 (small ρ) and s2
/// (large ρ) at the midpoint slope (s1 + s2)/2, by monotone interpolation of
/// the slope profile.
pub fn detect_crossover(profile: &SlopeProfile, s1: f64, s2: f64, tol: f64) -> Result<Crossover> {
    if profile.local_slope.len() < 4 {
        return Err(CoreError::Usage("slope profile too short".to_string()));
    }
    let first = profile.local_slope[0];
    let last = *profile.local_slope.last().unwrap();
    let (min_slope, max_slope) = profile
        .local_slope
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
            (lo.min(s), hi.max(s))
        });
    if (first - s1).abs() > tol || (last - s2).abs() > tol {
        return Err(CoreError::RegimeNotReached {
            min_slope,
            max_slope,
            s1,
            s2,
        });
    }
    let mid = 0.5 * (s1 + s2);
    let mut crossings = Vec::new();
    for i in 1..profile.local_slope.len() {
        let (a, b) = (profile.local_slope[i - 1], profile.local_slope[i]);
        if (a - mid) * (b - mid) <= 0.0 && a != b {
            // interpolate in ln(rho)
            let t = (mid - a) / (b - a);
            if !(0.0..=1.0).contains(&t) {
                continue;
            }
            let lr = profile.rho[i - 1].ln() * (1.0 - t) + profile.rho[i].ln() * t;
            crossings.push(lr.exp());
        }
    }
    match crossings.len() {
        0 => Err(CoreError::RegimeNotReached {
            min_slope,
            max_slope,
            s1,
            s2,
        }),
        1 => Ok(Crossover {
            rho_star: crossings[0],
            attained_s1: first,
            attained_s2: last,
        }),
        n => Err(CoreError::Usage(format!(
            "{n} midpoint-slope crossings found, expected exactly one"
        ))),
    }
}

/// Per-point relative deviation |U − U_asym| / |U| on a shared grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviationReport {
    pub rho: Vec<f64>,
    pub relative_deviation: Vec<f64>,
    /// Largest contiguous ρ range where the deviation stays below 5%, if
    /// any: (rho_lo, rho_hi).
    pub within_5pct: Option<(f64, f64)>,
}

/// Deviation of `asymptote` from `curve`, normalized by the first argument.
pub fn asymptote_deviation(curve: &EnergyCurve, asymptote: &EnergyCurve) -> Result<DeviationReport> {
    if curve.len() != asymptote.len()
        || curve
            .rho_grid
            .iter()
            .zip(&asymptote.rho_grid)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs())
    {
        return Err(CoreError::GridMismatch(
            "curves must share the same rho grid".to_string(),
        ));
    }
    let mut rho = Vec::new();
    let mut dev = Vec::new();
    for i in 0..curve.len() {
        if curve.flags[i] != PointFlag::Ok || curve.u_values[i] == 0.0 {
            continue;
        }
        rho.push(curve.rho_grid[i]);
        dev.push((curve.u_values[i] - asymptote.u_values[i]).abs() / curve.u_values[i].abs());
    }
    // longest run below 5%
    let mut best: Option<(usize, usize)> = None;
    let mut start: Option<usize> = None;
    for (i, &d) in dev.iter().enumerate() {
        if d < 0.05 {
            if start.is_none() {
                start = Some(i);
            }
            let s = start.unwrap();
            if best.map_or(true, |(a, b)| i - s > b - a) {
                best = Some((s, i));
            }
        } else {
            start = None;
        }
    }
    Ok(DeviationReport {
        within_5pct: best.map(|(a, b)| (rho[a], rho[b])),
        rho,
        relative_deviation: dev,
    })
}
