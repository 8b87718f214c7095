//! Energy curves over a separation grid, with emission to CSV/JSON and the
//! matching parsers.
//!
//! The CSV contract: columns exactly `rho_cm,U_erg,U_eV,regime_label,flags`,
//! numbers written in scientific notation with 17 significant digits so that
//! parse(emit(curve)) round-trips bit-exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::erg_to_ev;
use crate::error::{CoreError, Result};

/// Asymptotic-regime tag attached per curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    ScreenedClassical,
    Crossover,
    Rho4,
    Rho7,
    QedComparison,
    Unlabeled,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeLabel::ScreenedClassical => "screened-classical",
            RegimeLabel::Crossover => "crossover",
            RegimeLabel::Rho4 => "rho4",
            RegimeLabel::Rho7 => "rho7",
            RegimeLabel::QedComparison => "qed-comparison",
            RegimeLabel::Unlabeled => "unlabeled",
        };
        f.write_str(s)
    }
}

impl FromStr for RegimeLabel {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "screened-classical" => RegimeLabel::ScreenedClassical,
            "crossover" => RegimeLabel::Crossover,
            "rho4" => RegimeLabel::Rho4,
            "rho7" => RegimeLabel::Rho7,
            "qed-comparison" => RegimeLabel::QedComparison,
            "unlabeled" => RegimeLabel::Unlabeled,
            other => return Err(CoreError::Usage(format!("unknown regime label '{other}'"))),
        })
    }
}

/// Per-point status flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointFlag {
    Ok,
    Underflow,
    NotConverged,
}

impl fmt::Display for PointFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointFlag::Ok => "ok",
            PointFlag::Underflow => "underflow",
            PointFlag::NotConverged => "not-converged",
        };
        f.write_str(s)
    }
}

impl FromStr for PointFlag {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ok" => PointFlag::Ok,
            "underflow" => PointFlag::Underflow,
            "not-converged" => PointFlag::NotConverged,
            other => return Err(CoreError::Usage(format!("unknown point flag '{other}'"))),
        })
    }
}

/// Which operation produced a curve, with its parameters and config hash.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub operation: String,
    pub parameters: BTreeMap<String, String>,
    /// SHA-256 of the config file bytes that drove the run, hex encoded.
    pub config_hash: String,
}

/// U(ρ) samples over an ascending separation grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyCurve {
    /// Separations, cm, strictly increasing.
    pub rho_grid: Vec<f64>,
    /// Energies, erg. Underflowed points carry 0.0 and the underflow flag,
    /// never NaN.
    pub u_values: Vec<f64>,
    pub regime_labels: Vec<RegimeLabel>,
    pub flags: Vec<PointFlag>,
    pub provenance: Provenance,
}

impl EnergyCurve {
    pub fn new(
        rho_grid: Vec<f64>,
        u_values: Vec<f64>,
        regime_labels: Vec<RegimeLabel>,
        flags: Vec<PointFlag>,
        provenance: Provenance,
    ) -> Result<Self> {
        if rho_grid.len() != u_values.len()
            || rho_grid.len() != regime_labels.len()
            || rho_grid.len() != flags.len()
        {
            return Err(CoreError::Usage("curve column lengths differ".to_string()));
        }
        for w in rho_grid.windows(2) {
            if !(w[0] > 0.0 && w[1] > w[0]) {
                return Err(CoreError::domain(
                    "rho grid must be positive and strictly increasing".to_string(),
                ));
            }
        }
        if let Some(&r) = rho_grid.first() {
            if !(r > 0.0) {
                return Err(CoreError::domain("rho grid must be positive".to_string()));
            }
        }
        if u_values.iter().any(|u| u.is_nan()) {
            return Err(CoreError::domain("curve contains NaN energies".to_string()));
        }
        Ok(EnergyCurve {
            rho_grid,
            u_values,
            regime_labels,
            flags,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.rho_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho_grid.is_empty()
    }
}

/// Logarithmically spaced grid from rho_min to rho_max (inclusive) with the
/// given number of points per decade.
pub fn log_grid(rho_min: f64, rho_max: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    if !(rho_min > 0.0 && rho_max > rho_min) {
        return Err(CoreError::domain(
            "need 0 < rho_min < rho_max".to_string(),
        ));
    }
    if points_per_decade < 4 {
        return Err(CoreError::domain("points_per_decade must be >= 4".to_string()));
    }
    let decades = (rho_max / rho_min).log10();
    let n = (decades * points_per_decade as f64).ceil() as usize + 1;
    let step = decades / (n - 1) as f64;
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        grid.push(rho_min * 10f64.powf(step * i as f64));
    }
    // guard against rounding spoiling strict monotonicity at the last point
    if let Some(last) = grid.last_mut() {
        *last = rho_max;
    }
    Ok(grid)
}

/// Round-trip-safe scientific notation with 17 significant digits.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize a curve as CSV per the format contract.
pub fn emit_csv(curve: &EnergyCurve) -> Result<String> {
    if curve.is_empty() {
        return Err(CoreError::Usage("cannot emit an empty curve".to_string()));
    }
    let mut out = String::from("rho_cm,U_erg,U_eV,regime_label,flags\n");
    for i in 0..curve.len() {
        out.push_str(&fmt_g17(curve.rho_grid[i]));
        out.push(',');
        out.push_str(&fmt_g17(curve.u_values[i]));
        out.push(',');
        out.push_str(&fmt_g17(erg_to_ev(curve.u_values[i])));
        out.push(',');
        out.push_str(&curve.regime_labels[i].to_string());
        out.push(',');
        out.push_str(&curve.flags[i].to_string());
        out.push('\n');
    }
    Ok(out)
}

/// Parse a CSV file produced by [`emit_csv`]. Provenance is not carried by
/// CSV; the returned curve has an empty provenance block.
pub fn parse_csv(text: &str) -> Result<EnergyCurve> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "rho_cm,U_erg,U_eV,regime_label,flags" => {}
        Some((_, h)) => {
            return Err(CoreError::config(1, format!("unexpected CSV header '{h}'")));
        }
        None => return Err(CoreError::config(0, "empty CSV".to_string())),
    }
    let mut rho = Vec::new();
    let mut u = Vec::new();
    let mut labels = Vec::new();
    let mut flags = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(CoreError::config(idx + 1, format!("expected 5 columns, got {}", cols.len())));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| CoreError::config(idx + 1, format!("bad number '{s}': {e}")))
        };
        rho.push(parse_f(cols[0])?);
        u.push(parse_f(cols[1])?);
        let _u_ev = parse_f(cols[2])?;
        labels.push(cols[3].parse::<RegimeLabel>().map_err(|e| CoreError::config(idx + 1, e.to_string()))?);
        flags.push(cols[4].parse::<PointFlag>().map_err(|e| CoreError::config(idx + 1, e.to_string()))?);
    }
    EnergyCurve::new(rho, u, labels, flags, Provenance::default())
}

/// Serialize a curve as JSON, mirroring the CSV fields plus the full
/// provenance block.
pub fn emit_json(curve: &EnergyCurve) -> Result<String> {
    if curve.is_empty() {
        return Err(CoreError::Usage("cannot emit an empty curve".to_string()));
    }
    serde_json::to_string_pretty(curve).map_err(|e| CoreError::Usage(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<EnergyCurve> {
    let curve: EnergyCurve =
        serde_json::from_str(text).map_err(|e| CoreError::config(e.line(), e.to_string()))?;
    EnergyCurve::new(
        curve.rho_grid,
        curve.u_values,
        curve.regime_labels,
        curve.flags,
        curve.provenance,
    )
}
