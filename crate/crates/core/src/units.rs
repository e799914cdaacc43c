//! Natural units: ħ = c = ε₀ = k_B = 1, energies in eV, lengths in eV⁻¹.
//!
//! SI-flavoured quantities only appear at the I/O boundary through the helpers
//! below.

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// One ångström in nm.
pub const ANGSTROM_NM: f64 = 0.1;

/// Length in nm → eV⁻¹.
#[inline]
pub fn nm_to_natural(nm: f64) -> f64 {
    nm / HBAR_C_EV_NM
}

/// Length in eV⁻¹ → nm.
#[inline]
pub fn natural_to_nm(len: f64) -> f64 {
    len * HBAR_C_EV_NM
}

/// Volume in Å³ → eV⁻³.
pub fn angstrom3_to_natural(a3: f64) -> f64 {
    let a = nm_to_natural(ANGSTROM_NM);
    a3 * a * a * a
}

/// Polarizability given as α₀/(4πε₀) in Å³, returned as α₀ in eV⁻³ (ε₀ = 1).
pub fn polarizability_from_volume(a3: f64) -> f64 {
    4.0 * std::f64::consts::PI * angstrom3_to_natural(a3)
}
