//! Run configuration: a flat key-value text format with `[section]` headers.
//!
//! User-facing units are SI-friendly (nm, eV, mol/L, K); conversion to
//! Gaussian units happens once, here. Schema (keys per section):
//!
//! ```text
//! [run]
//! scenario           vacuum_zero_T | electrolyte_zero_T | electrolyte_finite_T
//!                    | qed_comparison | modes
//! rel_tol            relative quadrature tolerance (default 1e-8)
//! max_evals          integrand evaluation budget (default 200000)
//! n_max_cap          Matsubara term cap (default 1000000)
//!
//! [grid]
//! rho_min_nm         smallest separation, nm
//! rho_max_nm         largest separation, nm
//! points_per_decade  >= 4
//!
//! [atom]
//! alpha0_cm3         bare oscillator strength alpha_0 (cm^3); or
//! alpha_static_cm3   static polarizability alpha(0) = alpha_0/omega_0^2...
//! omega0_rad_s       transition frequency; or omega0_eV
//! damping_mode       none | radiation
//!
//! [medium]
//! kind               vacuum | constant | davies_ninham | tabulated
//! eps_static         zero-frequency dielectric constant
//! eps_background     background (high-frequency) dielectric constant
//! omega_p_rad_s      ionic plasma frequency (davies_ninham)
//! eta_rad_s          ionic collision frequency (davies_ninham)
//! table_path         two-column text file: xi_rad_s  epsilon (tabulated)
//!
//! [electrolyte]      (required by electrolyte_* scenarios)
//! concentration_mol_l   per-species ion number concentration
//! temperature_k         absolute temperature
//! ion_mass_amu          ion mass for the plasma-frequency report (default 23)
//! ```
//!
//! Keys use `key = value`; `#` starts a comment; blank lines are ignored.
//! Unknown keys and unknown sections are errors (with line numbers), so a
//! typo cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::constants::{ev_to_rad_s, mol_per_l_to_cm3, nm_to_cm, AMU};
use crate::error::{CoreError, Result};
use crate::media::{ElectrolyteParams, MediumModel};
use crate::polarizability::{AlphaProfile, DampingMode, OscillatorPolarizability};

/// Which computation a scan drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    VacuumZeroT,
    ElectrolyteZeroT,
    ElectrolyteFiniteT,
    QedComparison,
    Modes,
}

impl FromStr for Scenario {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "vacuum_zero_T" => Scenario::VacuumZeroT,
            "electrolyte_zero_T" => Scenario::ElectrolyteZeroT,
            "electrolyte_finite_T" => Scenario::ElectrolyteFiniteT,
            "qed_comparison" => Scenario::QedComparison,
            "modes" => Scenario::Modes,
            other => {
                return Err(CoreError::Usage(format!(
                    "unknown scenario '{other}' (expected vacuum_zero_T, electrolyte_zero_T, \
                     electrolyte_finite_T, qed_comparison or modes)"
                )))
            }
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::VacuumZeroT => "vacuum_zero_T",
            Scenario::ElectrolyteZeroT => "electrolyte_zero_T",
            Scenario::ElectrolyteFiniteT => "electrolyte_finite_T",
            Scenario::QedComparison => "qed_comparison",
            Scenario::Modes => "modes",
        })
    }
}

/// A fully validated run configuration in internal (Gaussian) units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub atom: OscillatorPolarizability,
    pub medium: MediumModel,
    pub electrolyte: Option<ElectrolyteParams>,
    /// Grid bounds, cm.
    pub rho_min: f64,
    pub rho_max: f64,
    pub points_per_decade: usize,
    pub rel_tol: f64,
    pub max_evals: usize,
    pub n_max_cap: usize,
    /// SHA-256 of the raw config bytes, hex encoded.
    pub config_hash: String,
}

/// Hex SHA-256 of the raw config bytes; identical files hash identically.
pub fn config_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// One parsed `key = value` with the line it came from.
struct Entry {
    line: usize,
    value: String,
    used: bool,
}

/// Sections mapped to their key-value entries, preserving line numbers.
struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
    section_lines: BTreeMap<String, usize>,
}

const KNOWN_SECTIONS: [&str; 5] = ["run", "grid", "atom", "medium", "electrolyte"];

fn parse_raw(text: &str) -> Result<RawConfig> {
    let mut sections: BTreeMap<String, BTreeMap<String, Entry>> = BTreeMap::new();
    let mut section_lines = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CoreError::config(lineno, "unterminated section header"))?
                .trim();
            if !KNOWN_SECTIONS.contains(&name) {
                return Err(CoreError::config(
                    lineno,
                    format!("unknown section '[{name}]'"),
                ));
            }
            if sections.contains_key(name) {
                return Err(CoreError::config(
                    lineno,
                    format!("duplicate section '[{name}]'"),
                ));
            }
            sections.insert(name.to_string(), BTreeMap::new());
            section_lines.insert(name.to_string(), lineno);
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CoreError::config(lineno, format!("expected 'key = value', got '{line}'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CoreError::config(lineno, "empty key or value"));
        }
        let section = current
            .as_ref()
            .ok_or_else(|| CoreError::config(lineno, "key appears before any [section] header"))?;
        let entries = sections.get_mut(section).unwrap();
        if entries
            .insert(
                key.to_string(),
                Entry {
                    line: lineno,
                    value: value.to_string(),
                    used: false,
                },
            )
            .is_some()
        {
            return Err(CoreError::config(
                lineno,
                format!("duplicate key '{key}' in section '[{section}]'"),
            ));
        }
    }
    Ok(RawConfig {
        sections,
        section_lines,
    })
}

impl RawConfig {
    fn take(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        let entry = self.sections.get_mut(section)?.get_mut(key)?;
        entry.used = true;
        Some((entry.line, entry.value.clone()))
    }

    fn require(&mut self, section: &str, key: &str) -> Result<(usize, String)> {
        self.take(section, key).ok_or_else(|| {
            let line = self.section_lines.get(section).copied().unwrap_or(0);
            CoreError::config(line, format!("missing key '{key}' in section '[{section}]'"))
        })
    }

    fn f64(&mut self, section: &str, key: &str) -> Result<f64> {
        let (line, value) = self.require(section, key)?;
        parse_f64(line, key, &value)
    }

    fn f64_opt(&mut self, section: &str, key: &str) -> Result<Option<f64>> {
        match self.take(section, key) {
            Some((line, value)) => parse_f64(line, key, &value).map(Some),
            None => Ok(None),
        }
    }

    fn section_line(&self, section: &str) -> usize {
        self.section_lines.get(section).copied().unwrap_or(0)
    }

    fn reject_unused(&self) -> Result<()> {
        for (section, entries) in &self.sections {
            for (key, entry) in entries {
                if !entry.used {
                    return Err(CoreError::config(
                        entry.line,
                        format!("unknown key '{key}' in section '[{section}]'"),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .parse()
        .map_err(|_| CoreError::config(line, format!("'{key}' must be a number, got '{value}'")))?;
    if !x.is_finite() {
        return Err(CoreError::config(line, format!("'{key}' must be finite")));
    }
    Ok(x)
}

fn reline(err: CoreError, line: usize) -> CoreError {
    // Constructor errors from the physics layer carry no file position; pin
    // them to the section that supplied the offending values.
    match err {
        CoreError::Config { .. } => err,
        other => CoreError::config(line, other.to_string()),
    }
}

/// Read the medium table format: two whitespace-separated columns,
/// ξ in rad/s ascending and dimensionless ε, `#` comments allowed.
pub fn parse_medium_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (a, b) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(CoreError::config(
                    lineno,
                    format!("expected two columns (xi_rad_s epsilon), got '{line}'"),
                ))
            }
        };
        let xi = parse_f64(lineno, "xi_rad_s", a)?;
        let eps = parse_f64(lineno, "epsilon", b)?;
        rows.push((xi, eps));
    }
    Ok(rows)
}

fn load_medium(raw: &mut RawConfig, base_dir: &Path) -> Result<MediumModel> {
    let (kind_line, kind) = raw.require("medium", "kind")?;
    match kind.as_str() {
        "vacuum" => Ok(MediumModel::vacuum()),
        "constant" => {
            let eps = raw.f64("medium", "eps_static")?;
            MediumModel::constant(eps).map_err(|e| reline(e, kind_line))
        }
        "davies_ninham" => {
            let eps_background = raw.f64("medium", "eps_background")?;
            let eps_static = raw.f64("medium", "eps_static")?;
            let omega_p = raw.f64("medium", "omega_p_rad_s")?;
            let eta = raw.f64("medium", "eta_rad_s")?;
            MediumModel::davies_ninham(eps_background, eps_static, omega_p, eta)
                .map_err(|e| reline(e, kind_line))
        }
        "tabulated" => {
            let eps_static = raw.f64("medium", "eps_static")?;
            let (path_line, rel_path) = raw.require("medium", "table_path")?;
            let path = base_dir.join(&rel_path);
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CoreError::config(path_line, format!("cannot read '{}': {e}", path.display()))
            })?;
            let table = parse_medium_table(&text)?;
            MediumModel::tabulated(eps_static, table).map_err(|e| reline(e, path_line))
        }
        other => Err(CoreError::config(
            kind_line,
            format!("unknown medium kind '{other}'"),
        )),
    }
}

fn load_atom(raw: &mut RawConfig) -> Result<OscillatorPolarizability> {
    let section_line = raw.section_line("atom");
    let omega0 = match (
        raw.f64_opt("atom", "omega0_rad_s")?,
        raw.f64_opt("atom", "omega0_eV")?,
    ) {
        (Some(w), None) => w,
        (None, Some(ev)) => ev_to_rad_s(ev),
        (Some(_), Some(_)) => {
            return Err(CoreError::config(
                section_line,
                "give omega0_rad_s or omega0_eV, not both",
            ))
        }
        (None, None) => {
            return Err(CoreError::config(
                section_line,
                "missing omega0_rad_s or omega0_eV in section '[atom]'",
            ))
        }
    };
    let damping = match raw.take("atom", "damping_mode") {
        None => DampingMode::None,
        Some((line, v)) => match v.as_str() {
            "none" => DampingMode::None,
            "radiation" => DampingMode::Radiation,
            other => {
                return Err(CoreError::config(
                    line,
                    format!("damping_mode must be none or radiation, got '{other}'"),
                ))
            }
        },
    };
    match (
        raw.f64_opt("atom", "alpha0_cm3")?,
        raw.f64_opt("atom", "alpha_static_cm3")?,
    ) {
        (Some(alpha0), None) => {
            OscillatorPolarizability::new(alpha0, omega0, damping, AlphaProfile::Lorentz)
                .map_err(|e| reline(e, section_line))
        }
        (None, Some(alpha_static)) => {
            OscillatorPolarizability::new(
                alpha_static * omega0 * omega0,
                omega0,
                damping,
                AlphaProfile::StaticLimit,
            )
            .map_err(|e| reline(e, section_line))
        }
        (Some(_), Some(_)) => Err(CoreError::config(
            section_line,
            "give alpha0_cm3 or alpha_static_cm3, not both",
        )),
        (None, None) => Err(CoreError::config(
            section_line,
            "missing alpha0_cm3 or alpha_static_cm3 in section '[atom]'",
        )),
    }
}

/// Parse and validate a config file's text. `base_dir` resolves relative
/// `table_path` references.
pub fn parse_run_config(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let mut raw = parse_raw(text)?;
    for required in ["run", "grid", "atom", "medium"] {
        if !raw.sections.contains_key(required) {
            return Err(CoreError::config(
                0,
                format!("missing required section '[{required}]'"),
            ));
        }
    }

    let (scen_line, scen) = raw.require("run", "scenario")?;
    let scenario: Scenario = scen.parse().map_err(|e| reline(e, scen_line))?;
    let rel_tol = raw.f64_opt("run", "rel_tol")?.unwrap_or(1e-8);
    let max_evals = raw.f64_opt("run", "max_evals")?.unwrap_or(200_000.0) as usize;
    let n_max_cap = raw.f64_opt("run", "n_max_cap")?.unwrap_or(1_000_000.0) as usize;
    if !(rel_tol > 0.0 && rel_tol <= 1e-2) {
        return Err(CoreError::config(
            raw.section_line("run"),
            format!("rel_tol must lie in (0, 1e-2], got {rel_tol:e}"),
        ));
    }

    let grid_line = raw.section_line("grid");
    let rho_min = nm_to_cm(raw.f64("grid", "rho_min_nm")?);
    let rho_max = nm_to_cm(raw.f64("grid", "rho_max_nm")?);
    let ppd = raw.f64("grid", "points_per_decade")?;
    if !(rho_min > 0.0 && rho_max > rho_min) {
        return Err(CoreError::config(
            grid_line,
            "need 0 < rho_min_nm < rho_max_nm",
        ));
    }
    if ppd < 4.0 || ppd.fract() != 0.0 {
        return Err(CoreError::config(
            grid_line,
            format!("points_per_decade must be an integer >= 4, got {ppd}"),
        ));
    }

    let atom = load_atom(&mut raw)?;
    let medium = load_medium(&mut raw, base_dir)?;

    let needs_electrolyte = matches!(
        scenario,
        Scenario::ElectrolyteZeroT | Scenario::ElectrolyteFiniteT
    );
    let electrolyte = if raw.sections.contains_key("electrolyte") {
        let line = raw.section_line("electrolyte");
        let conc = raw.f64("electrolyte", "concentration_mol_l")?;
        let temp = raw.f64("electrolyte", "temperature_k")?;
        let mass_amu = raw.f64_opt("electrolyte", "ion_mass_amu")?.unwrap_or(23.0);
        Some(
            ElectrolyteParams::new(
                mol_per_l_to_cm3(conc),
                temp,
                medium.eps_static(),
                mass_amu * AMU,
            )
            .map_err(|e| reline(e, line))?,
        )
    } else if needs_electrolyte {
        return Err(CoreError::config(
            0,
            format!("scenario {scenario} requires an [electrolyte] section"),
        ));
    } else {
        None
    };

    raw.reject_unused()?;

    Ok(RunConfig {
        scenario,
        atom,
        medium,
        electrolyte,
        rho_min,
        rho_max,
        points_per_decade: ppd as usize,
        rel_tol,
        max_evals,
        n_max_cap,
        config_hash: config_hash(text.as_bytes()),
    })
}

/// Read and parse a config file from disk; relative table paths resolve
/// against the config file's directory.
pub fn load_run_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_run_config(&text, base_dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
# resonance scan over an electrolyte
[run]
scenario = electrolyte_finite_T
rel_tol = 1e-9

[grid]
rho_min_nm = 0.1
rho_max_nm = 1e6
points_per_decade = 8

[atom]
alpha_static_cm3 = 3e-23
omega0_eV = 10.0

[medium]
kind = davies_ninham
eps_background = 78.5
eps_static = 78.5
omega_p_rad_s = 2.1e12
eta_rad_s = 1e13

[electrolyte]
concentration_mol_l = 0.1
temperature_k = 298.0
";

    #[test]
    fn full_config_parses() {
        let cfg = parse_run_config(GOOD, Path::new(".")).unwrap();
        assert_eq!(cfg.scenario, Scenario::ElectrolyteFiniteT);
        assert!((cfg.rho_min - 1e-8).abs() < 1e-20);
        assert!((cfg.rho_max - 1e-1).abs() < 1e-12);
        assert_eq!(cfg.points_per_decade, 8);
        assert_eq!(cfg.rel_tol, 1e-9);
        // alpha(0) round-trips through the alpha_static_cm3 key
        assert!((cfg.atom.alpha_static() / 3e-23 - 1.0).abs() < 1e-12);
        let e = cfg.electrolyte.unwrap();
        assert!((e.temperature - 298.0).abs() < 1e-12);
        assert_eq!(cfg.config_hash.len(), 64);
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = config_hash(GOOD.as_bytes());
        let b = config_hash(GOOD.as_bytes());
        assert_eq!(a, b);
        let c = config_hash(GOOD.replace("0.1", "0.2").as_bytes());
        assert_ne!(a, c);
    }

    fn expect_config_err(text: &str, needle: &str) -> usize {
        match parse_run_config(text, Path::new(".")) {
            Err(CoreError::Config { line, msg }) => {
                assert!(msg.contains(needle), "'{msg}' missing '{needle}'");
                line
            }
            other => panic!("expected config error with '{needle}', got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let bad = GOOD.replace("rel_tol = 1e-9", "rel_tolerance = 1e-9");
        let line = expect_config_err(&bad, "unknown key 'rel_tolerance'");
        assert_eq!(line, 4);
    }

    #[test]
    fn missing_section_is_rejected() {
        let bad = GOOD.replace("[electrolyte]", "[medium2]");
        expect_config_err(&bad, "unknown section");
        let bad: String = GOOD
            .lines()
            .take_while(|l| !l.starts_with("[electrolyte]"))
            .map(|l| format!("{l}\n"))
            .collect();
        expect_config_err(&bad, "requires an [electrolyte] section");
    }

    #[test]
    fn malformed_lines_are_rejected() {
        expect_config_err("[run]\nscenario electrolyte_zero_T\n", "key = value");
        expect_config_err("scenario = modes\n", "before any [section]");
        expect_config_err("[run\nscenario = modes\n", "unterminated");
        let dup = format!("{GOOD}temperature_k = 299.0\n");
        expect_config_err(&dup, "duplicate key");
    }

    #[test]
    fn domain_violations_carry_lines() {
        let bad = GOOD.replace("points_per_decade = 8", "points_per_decade = 2");
        expect_config_err(&bad, "points_per_decade");
        let bad = GOOD.replace("omega0_eV = 10.0", "omega0_eV = abc");
        expect_config_err(&bad, "must be a number");
        let bad = GOOD.replace("eta_rad_s = 1e13", "eta_rad_s = -1e13");
        assert!(parse_run_config(&bad, Path::new(".")).is_err());
    }

    #[test]
    fn ambiguous_atom_keys_rejected() {
        let bad = GOOD.replace(
            "alpha_static_cm3 = 3e-23",
            "alpha_static_cm3 = 3e-23\nalpha0_cm3 = 1.0",
        );
        expect_config_err(&bad, "not both");
    }

    #[test]
    fn medium_table_parses_and_rejects_bad_rows() {
        let table = "# xi eps\n1e12  78.0\n1e14  10.0 # tail\n";
        let rows = parse_medium_table(table).unwrap();
        assert_eq!(rows, vec![(1e12, 78.0), (1e14, 10.0)]);
        assert!(parse_medium_table("1e12\n").is_err());
        assert!(parse_medium_table("1e12 78.0 extra\n").is_err());
        assert!(parse_medium_table("1e12 abc\n").is_err());
    }

    #[test]
    fn tabulated_medium_loads_from_disk() {
        let dir = std::env::temp_dir().join("resonance-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("eps.tab"), "1e11 78.0\n1e15 5.0\n1e18 1.0\n").unwrap();
        let text = GOOD
            .replace(
                "kind = davies_ninham",
                "kind = tabulated\ntable_path = eps.tab",
            )
            .replace("eps_background = 78.5\n", "")
            .replace("omega_p_rad_s = 2.1e12\n", "")
            .replace("eta_rad_s = 1e13\n", "");
        let cfg = parse_run_config(&text, &dir).unwrap();
        assert!(matches!(cfg.medium, MediumModel::Tabulated { .. }));
    }
}
