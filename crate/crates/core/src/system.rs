//! Input specifications, derived dimensionless groups and the assembled
//! [`System`] every physics routine works on.

use crate::error::{Error, Result};
use crate::media::DrudeModel;
use crate::forces::ForceEstimate;
use crate::particle::{CertificateCache, Oscillator};
use std::sync::OnceLock;
use crate::stats::TvMode;
use crate::units;

/// Upper bound on the dressing parameter g accepted by validation.
pub const MAX_COUPLING: f64 = 1e-2;
/// Nonrelativistic cap on v/c.
pub const MAX_BETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec {
    /// Transition frequency, eV.
    pub omega_a: f64,
    /// α₀/(4πε₀) in Å³.
    pub alpha0_angstrom3: f64,
    /// Fixed to the surface normal.
    pub dipole_axis: [f64; 3],
}

impl Default for ParticleSpec {
    fn default() -> Self {
        ParticleSpec { omega_a: 1.45, alpha0_angstrom3: 59.45, dipole_axis: [0.0, 0.0, 1.0] }
    }
}

impl ParticleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_a > 0.0 && self.omega_a.is_finite()) {
            return Err(Error::Validation(format!("omega_a must be positive, got {}", self.omega_a)));
        }
        if !(self.alpha0_angstrom3 > 0.0 && self.alpha0_angstrom3.is_finite()) {
            return Err(Error::Validation(format!("alpha0 must be positive, got {}", self.alpha0_angstrom3)));
        }
        let [x, y, z] = self.dipole_axis;
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("dipole_axis must be a unit vector (|d| = {norm})")));
        }
        if x != 0.0 || y != 0.0 {
            return Err(Error::Validation("dipole_axis must be the surface normal [0, 0, ±1]".into()));
        }
        Ok(())
    }

    /// α₀ in natural units (eV⁻³).
    pub fn alpha0(&self) -> f64 {
        units::polarizability_from_volume(self.alpha0_angstrom3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    pub omega_p: f64,
    pub gamma: f64,
}

impl Default for MaterialSpec {
    fn default() -> Self {
        MaterialSpec { omega_p: 8.39, gamma: 0.01 * 8.39 }
    }
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_p > 0.0 && self.omega_p.is_finite()) {
            return Err(Error::Validation(format!("omega_p must be positive, got {}", self.omega_p)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Validation(format!(
                "gamma must be strictly positive (passivity and the low-frequency response need dissipation), got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySpec {
    /// z_a ω_a / c.
    pub za_dimensionless: f64,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        GeometrySpec { za_dimensionless: 10f64.powf(-1.5) }
    }
}

impl GeometrySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.za_dimensionless > 0.0 && self.za_dimensionless.is_finite()) {
            return Err(Error::Validation(format!("za_dimensionless must be positive, got {}", self.za_dimensionless)));
        }
        Ok(())
    }

    /// Height in eV⁻¹ for the given transition frequency.
    pub fn z_a(&self, omega_a: f64) -> f64 {
        self.za_dimensionless / omega_a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KinematicsSpec {
    /// v/c.
    pub beta: f64,
}

impl KinematicsSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) {
            return Err(Error::Validation(format!("beta must be non-negative, got {}", self.beta)));
        }
        if self.beta >= MAX_BETA {
            return Err(Error::Validation(format!("beta = {} outside the nonrelativistic range [0, {MAX_BETA})", self.beta)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedGroups {
    /// T̃_v / T_a = β / (2 z_a ω_a / c).
    pub ttilde_v_over_ta: f64,
    /// T_a = ω_a.
    pub t_a: f64,
    /// g = [α₀/(4πε₀)] / (4 z_a³).
    pub coupling: f64,
    /// Height, eV⁻¹.
    pub z_a: f64,
    /// Velocity (c = 1).
    pub v: f64,
    /// α₀, eV⁻³.
    pub alpha0: f64,
}

/// Dimensionless groups of a configuration. Pure: equal inputs give
/// bit-identical outputs.
pub fn derive_groups(p: &ParticleSpec, m: &MaterialSpec, g: &GeometrySpec, k: &KinematicsSpec) -> Result<DerivedGroups> {
    p.validate()?;
    m.validate()?;
    g.validate()?;
    k.validate()?;
    let z_a = g.z_a(p.omega_a);
    let alpha0 = p.alpha0();
    let coupling = units::angstrom3_to_natural(p.alpha0_angstrom3) / (4.0 * z_a * z_a * z_a);
    if coupling >= MAX_COUPLING {
        return Err(Error::Validation(format!(
            "dressing parameter g = {coupling:.3e} exceeds the perturbative bound {MAX_COUPLING}"
        )));
    }
    Ok(DerivedGroups {
        ttilde_v_over_ta: k.beta / (2.0 * g.za_dimensionless),
        t_a: p.omega_a,
        coupling,
        z_a,
        v: k.beta,
        alpha0,
    })
}

/// Numerical and modelling settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Base relative tolerance of the force integrals.
    pub rel_tol: f64,
    /// q-integrals stop at `q_cut / (2 z_a)`.
    pub q_cut: f64,
    /// Frequency integrals stop at `freq_cut · max(ω_a, ω_p)`.
    pub freq_cut: f64,
    pub tv_mode: TvMode,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { rel_tol: 1e-8, q_cut: 30.0, freq_cut: 50.0, tv_mode: TvMode::Resolved }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-12 && self.rel_tol <= 1e-3) {
            return Err(Error::Validation(format!("rel_tol must lie in [1e-12, 1e-3], got {}", self.rel_tol)));
        }
        if !(self.q_cut >= 10.0 && self.q_cut.is_finite()) {
            return Err(Error::Validation(format!("q_cut must be at least 10, got {}", self.q_cut)));
        }
        if !(self.freq_cut >= 5.0 && self.freq_cut.is_finite()) {
            return Err(Error::Validation(format!("freq_cut must be at least 5, got {}", self.freq_cut)));
        }
        Ok(())
    }
}

/// Particle, half-space and height in natural units, plus settings.
///
/// Velocity-dependent quantities are reached through [`System::moving`],
/// which hands out a passivity-certified view.
#[derive(Debug)]
pub struct System {
    pub particle: Oscillator,
    pub medium: DrudeModel,
    pub z_a: f64,
    pub settings: Settings,
    pub(crate) certificates: CertificateCache,
    pub(crate) f0_cache: OnceLock<Result<ForceEstimate>>,
    pub(crate) f_bare_cache: OnceLock<Result<ForceEstimate>>,
}

impl Clone for System {
    fn clone(&self) -> Self {
        System::from_parts(self.particle, self.medium, self.z_a, self.settings)
    }
}

impl System {
    /// Builds the system from validated specs.
    pub fn new(p: &ParticleSpec, m: &MaterialSpec, g: &GeometrySpec, settings: Settings) -> Result<System> {
        let groups = derive_groups(p, m, g, &KinematicsSpec::default())?;
        settings.validate()?;
        Ok(System::from_parts(
            Oscillator { omega_a: p.omega_a, alpha0: groups.alpha0 },
            DrudeModel::new(m.omega_p, m.gamma)?,
            groups.z_a,
            settings,
        ))
    }

    /// Default particle, gold-like Drude metal and z_a ω_a/c = 10^-1.5.
    pub fn reference() -> System {
        System::new(&ParticleSpec::default(), &MaterialSpec::default(), &GeometrySpec::default(), Settings::default())
            .expect("reference configuration is valid")
    }

    /// Unchecked assembly (α₀ = 0 allowed, for free-field studies).
    pub fn from_parts(particle: Oscillator, medium: DrudeModel, z_a: f64, settings: Settings) -> System {
        System {
            particle,
            medium,
            z_a,
            settings,
            certificates: CertificateCache::default(),
            f0_cache: OnceLock::new(),
            f_bare_cache: OnceLock::new(),
        }
    }

    pub fn with_settings(&self, settings: Settings) -> System {
        System::from_parts(self.particle, self.medium, self.z_a, settings)
    }

    pub fn with_height(&self, z_a: f64) -> System {
        System::from_parts(self.particle, self.medium, z_a, self.settings)
    }

    pub fn with_alpha0(&self, alpha0: f64) -> System {
        System::from_parts(Oscillator { alpha0, ..self.particle }, self.medium, self.z_a, self.settings)
    }

    pub fn with_medium(&self, medium: DrudeModel) -> System {
        System::from_parts(self.particle, medium, self.z_a, self.settings)
    }

    /// g = α₀ / (16π z_a³), i.e. the static self-energy times α₀.
    pub fn coupling(&self) -> f64 {
        self.particle.alpha0 / (16.0 * std::f64::consts::PI * self.z_a.powi(3))
    }

    /// T̃_v = v / (2 z_a).
    pub fn ttilde(&self, v: f64) -> f64 {
        v / (2.0 * self.z_a)
    }

    /// Velocity giving T̃_v/T_a = `ratio`.
    pub fn velocity_for_ttilde_ratio(&self, ratio: f64) -> f64 {
        2.0 * self.z_a * self.particle.omega_a * ratio
    }

    pub(crate) fn q_max(&self) -> f64 {
        self.settings.q_cut / (2.0 * self.z_a)
    }

    pub(crate) fn freq_max(&self) -> f64 {
        self.settings.freq_cut * self.particle.omega_a.max(self.medium.omega_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_groups() {
        let d = derive_groups(
            &ParticleSpec::default(),
            &MaterialSpec::default(),
            &GeometrySpec::default(),
            &KinematicsSpec { beta: 0.1 },
        )
        .unwrap();
        assert!((d.ttilde_v_over_ta - 1.581_138_830_084_189_8).abs() < 1e-12);
        assert!((units::natural_to_nm(d.z_a) - 4.303_47).abs() < 1e-4);
        assert!((d.coupling - 1.8648e-4).abs() < 1e-7);
        let s = System::reference();
        assert!((s.coupling() / d.coupling - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        let p = ParticleSpec::default();
        let m = MaterialSpec::default();
        let g = GeometrySpec::default();
        assert!(derive_groups(&p, &m, &g, &KinematicsSpec { beta: 0.5 }).is_err());
        assert!(derive_groups(&p, &m, &g, &KinematicsSpec { beta: -1e-3 }).is_err());
        assert!(derive_groups(&p, &m, &GeometrySpec { za_dimensionless: 0.0 }, &KinematicsSpec::default()).is_err());
        assert!(derive_groups(&p, &MaterialSpec { gamma: 0.0, ..m }, &g, &KinematicsSpec::default()).is_err());
        let tilted = ParticleSpec { dipole_axis: [0.6, 0.0, 0.8], ..p };
        assert!(tilted.validate().is_err());
        // z_a ω_a/c = 10^-2.5 pushes g close to 0.19
        let close = GeometrySpec { za_dimensionless: 10f64.powf(-2.5) };
        assert!(derive_groups(&p, &m, &close, &KinematicsSpec::default()).is_err());
    }
}
