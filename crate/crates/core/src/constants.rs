//! Physical constants in Gaussian (CGS) units and boundary unit conversions.
//!
//! All internal computations run in CGS: lengths in cm, energies in erg,
//! frequencies in rad/s, charge in esu. User-facing units (nm, eV, mol/L)
//! are converted once at the configuration boundary.

/// Reduced Planck constant, erg s.
pub const HBAR: f64 = 1.054_571_817e-27;

/// Boltzmann constant, erg/K.
pub const K_B: f64 = 1.380_649e-16;

/// Speed of light in free space, cm/s.
pub const C0: f64 = 2.997_924_58e10;

/// Elementary charge, esu (statC).
pub const E_CHARGE: f64 = 4.803_204_712_57e-10;

/// Atomic mass unit, g.
pub const AMU: f64 = 1.660_539_066_60e-24;

/// Electron mass, g.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-28;

/// Avogadro constant, 1/mol.
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// One electronvolt in erg.
pub const ERG_PER_EV: f64 = 1.602_176_634e-12;

/// Convert a length in nanometres to centimetres.
pub fn nm_to_cm(nm: f64) -> f64 {
    nm * 1.0e-7
}

/// Convert a length in centimetres to nanometres.
pub fn cm_to_nm(cm: f64) -> f64 {
    cm * 1.0e7
}

/// Convert an energy in erg to electronvolts.
pub fn erg_to_ev(erg: f64) -> f64 {
    erg / ERG_PER_EV
}

/// Convert a photon energy in eV to an angular frequency in rad/s.
pub fn ev_to_rad_s(ev: f64) -> f64 {
    ev * ERG_PER_EV / HBAR
}

/// Convert a molar concentration (mol/L) to a number density (cm^-3).
pub fn mol_per_l_to_cm3(mol_l: f64) -> f64 {
    mol_l * AVOGADRO / 1.0e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conversion_round_trip() {
        let erg = 2.5 * ERG_PER_EV;
        assert!((erg_to_ev(erg) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn tenth_molar_number_density() {
        // 0.1 mol/L of a monovalent salt -> 6.022e19 ions of each species per cm^3
        let n = mol_per_l_to_cm3(0.1);
        assert!((n / 6.022_140_76e19 - 1.0).abs() < 1e-12);
    }
}
