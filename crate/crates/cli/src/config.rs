//! Strict JSON configuration. Every section and key is optional; anything
//! not given falls back to the reference gold-like parameters. Unknown keys
//! are errors.

use crate::axis::Axis;
use crate::CliError;
use neqcp::stats::TvMode;
use neqcp::system::{GeometrySpec, MaterialSpec, ParticleSpec, Settings};
use neqcp::System;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RawConfig {
    pub particle: RawParticle,
    pub material: RawMaterial,
    pub geometry: RawGeometry,
    pub settings: RawSettings,
    pub sweep: Option<RawSweep>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RawParticle {
    /// eV
    pub omega_a: f64,
    /// α₀/(4πε₀), Å³
    pub alpha0_angstrom3: f64,
}

impl Default for RawParticle {
    fn default() -> Self {
        let p = ParticleSpec::default();
        RawParticle { omega_a: p.omega_a, alpha0_angstrom3: p.alpha0_angstrom3 }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RawMaterial {
    /// eV
    pub omega_p: f64,
    /// eV
    pub gamma: f64,
}

impl Default for RawMaterial {
    fn default() -> Self {
        let m = MaterialSpec::default();
        RawMaterial { omega_p: m.omega_p, gamma: m.gamma }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RawGeometry {
    pub za_omega_a_over_c: f64,
}

impl Default for RawGeometry {
    fn default() -> Self {
        RawGeometry { za_omega_a_over_c: GeometrySpec::default().za_dimensionless }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RawSettings {
    pub rel_tol: f64,
    pub q_cut: f64,
    pub freq_cut: f64,
    pub tv_mode: String,
}

/// Sweeps default to 1e-6; the library default (1e-8) is for single points.
pub const SWEEP_REL_TOL: f64 = 1e-6;

impl Default for RawSettings {
    fn default() -> Self {
        let s = Settings::default();
        RawSettings { rel_tol: SWEEP_REL_TOL, q_cut: s.q_cut, freq_cut: s.freq_cut, tv_mode: s.tv_mode.as_str().into() }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub enum RawSweep {
    #[serde(rename = "beta_log_range")]
    BetaLog(f64, f64, usize),
    #[serde(rename = "Ttilde_over_Ta_log_range", alias = "ttilde_over_ta_log_range")]
    TtildeLog(f64, f64, usize),
    #[serde(rename = "beta_values")]
    BetaValues(Vec<f64>),
    #[serde(rename = "Ttilde_over_Ta_values", alias = "ttilde_over_ta_values")]
    TtildeValues(Vec<f64>),
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    pub particle: ParticleSpec,
    pub material: MaterialSpec,
    pub geometry: GeometrySpec,
    pub settings: Settings,
    pub sweep: Option<Axis>,
}

impl SystemConfig {
    pub fn system(&self) -> System {
        System::new(&self.particle, &self.material, &self.geometry, self.settings).expect("validated at load time")
    }

    /// β = (T̃_v/T_a)·2 z_a ω_a/c.
    pub fn beta_for_ratio(&self, ratio: f64) -> f64 {
        ratio * 2.0 * self.geometry.za_dimensionless
    }

    pub fn ratio_for_beta(&self, beta: f64) -> f64 {
        beta / (2.0 * self.geometry.za_dimensionless)
    }
}

pub fn parse_config(text: &str) -> Result<SystemConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(raw)
}

pub fn load_config(path: &Path) -> Result<SystemConfig, CliError> {
    // an unreadable config is a configuration error, not a runtime one
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn validate(raw: RawConfig) -> Result<SystemConfig, CliError> {
    let particle = ParticleSpec { omega_a: raw.particle.omega_a, alpha0_angstrom3: raw.particle.alpha0_angstrom3, ..ParticleSpec::default() };
    let material = MaterialSpec { omega_p: raw.material.omega_p, gamma: raw.material.gamma };
    let geometry = GeometrySpec { za_dimensionless: raw.geometry.za_omega_a_over_c };
    let tv_mode = TvMode::parse(&raw.settings.tv_mode)
        .ok_or_else(|| CliError::Validation(format!("settings.tv_mode: unknown mode {:?} (resolved | fixed_infra | fixed_uv)", raw.settings.tv_mode)))?;
    let settings = Settings { rel_tol: raw.settings.rel_tol, q_cut: raw.settings.q_cut, freq_cut: raw.settings.freq_cut, tv_mode };
    // also checks the dressing bound
    System::new(&particle, &material, &geometry, settings).map_err(|e| CliError::Validation(e.to_string()))?;
    let mut cfg = SystemConfig { particle, material, geometry, settings, sweep: None };
    cfg.sweep = match raw.sweep {
        None => None,
        Some(s) => Some(match s {
            RawSweep::BetaLog(a, b, n) => Axis::log_range(crate::axis::AxisKind::Beta, a, b, n),
            RawSweep::TtildeLog(a, b, n) => Axis::log_range(crate::axis::AxisKind::TtildeOverTa, a, b, n),
            RawSweep::BetaValues(v) => Axis::values(crate::axis::AxisKind::Beta, v),
            RawSweep::TtildeValues(v) => Axis::values(crate::axis::AxisKind::TtildeOverTa, v),
        }?),
    };
    if let Some(axis) = &cfg.sweep {
        axis.check_velocity_cap(&cfg)?;
    }
    Ok(cfg)
}
