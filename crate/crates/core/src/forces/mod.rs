//! Normal force on the moving dipole and its decomposition.
//!
//! ```text
//! F = F^Ds + F^Th + F^As
//! ```
//!
//! F^Ds is the Wick-rotated (imaginary-frequency) part, F^Th the thermal-like
//! part weighted by the motion-induced occupation, and F^As a term that needs
//! an asymmetric imaginary part of the two-point Green tensor — zero for the
//! planar half-space. Forces are in eV² (ħ = c = 1); negative is attractive.

mod antisymmetric;
mod ds;
mod thermal;

pub use antisymmetric::{Geometry, SymmetryCheck};
pub use ds::DsResult;
pub use thermal::{HighVelocity, LowVelocity, ThermalAnalogue, HIGHV_GATE, LOWV_GATE};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadError, QuadSpec};
use crate::system::System;

/// A force value with the absolute error estimate of its quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceEstimate {
    pub value: f64,
    pub error: f64,
}

impl ForceEstimate {
    pub const ZERO: ForceEstimate = ForceEstimate { value: 0.0, error: 0.0 };

    pub fn new(value: f64, error: f64) -> ForceEstimate {
        ForceEstimate { value, error }
    }

    /// Error estimate above a tenth of the value. Exact zeros are not flagged.
    pub fn flagged(&self) -> bool {
        if self.value == 0.0 && self.error == 0.0 {
            return false;
        }
        !(self.error.is_finite() && 10.0 * self.error <= self.value.abs())
    }

    pub fn relative_error(&self) -> f64 {
        self.error / self.value.abs()
    }
}

impl std::ops::Add for ForceEstimate {
    type Output = ForceEstimate;
    fn add(self, o: ForceEstimate) -> ForceEstimate {
        ForceEstimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl std::ops::Mul<f64> for ForceEstimate {
    type Output = ForceEstimate;
    fn mul(self, s: f64) -> ForceEstimate {
        ForceEstimate { value: self.value * s, error: self.error * s.abs() }
    }
}

/// Outer quadratures: a budget-exhausted run is still usable when its own
/// error estimate is below 10% (it is then flagged downstream); otherwise it
/// is an error.
pub(crate) fn outer(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadSpec,
    context: &'static str,
) -> Result<ForceEstimate> {
    if a >= b {
        return Ok(ForceEstimate::ZERO);
    }
    match integrate(f, a, b, spec) {
        Ok(r) => Ok(ForceEstimate::new(r.value, r.error_estimate)),
        Err(QuadError::NonConvergence(r)) if r.error_estimate.is_finite() && r.error_estimate < 0.1 * r.value.abs() => {
            Ok(ForceEstimate::new(r.value, r.error_estimate))
        }
        Err(QuadError::NonConvergence(r)) => {
            Err(Error::NonConvergence { context, value: r.value, error_estimate: r.error_estimate })
        }
        Err(e) => Err(Error::Domain(format!("{context}: {e}"))),
    }
}

/// Which optional routes [`System::force_breakdown`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BreakdownOptions {
    /// F^Ds with the bare polarizability in place of the dressed one.
    pub bare_ds: bool,
    /// Local-thermal-equilibrium force F^Ds + F^Th|_{n=0}.
    pub lte: bool,
    /// Closed-form velocity asymptotes.
    pub asymptotes: bool,
}

impl Default for BreakdownOptions {
    fn default() -> Self {
        BreakdownOptions { bare_ds: false, lte: true, asymptotes: true }
    }
}

/// Everything the sweep reports at one velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceBreakdown {
    pub v: f64,
    pub ttilde_over_ta: f64,
    pub f0: ForceEstimate,
    pub f_ds: ForceEstimate,
    pub f_th: ForceEstimate,
    pub f_as: f64,
    pub f_total: ForceEstimate,
    pub f_ds_bare: Option<ForceEstimate>,
    pub f_lte: Option<ForceEstimate>,
    pub f_th_highv: Option<HighVelocity>,
    pub f_th_lowv: Option<LowVelocity>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// |Im F^Ds| / |F^Ds|: imaginary residue of the Wick-rotated integrand.
    pub reality_residual: f64,
    /// T_v(ω_a)/T_a; 0 at rest.
    pub tv_at_resonance_over_ta: f64,
    /// Quadrature results whose error estimate exceeds a tenth of the value.
    /// Asymptote validity is carried on the asymptotes themselves.
    pub flags: Vec<String>,
}

impl ForceBreakdown {
    pub fn flagged(&self) -> bool {
        !self.diagnostics.flags.is_empty()
    }
}

/// Largest accepted |Im F^Ds|/|F^Ds|.
pub const REALITY_TOLERANCE: f64 = 1e-6;

impl System {
    /// Full decomposition at velocity v (sign ignored: the force is even in v).
    pub fn force_breakdown(&self, v: f64, opts: &BreakdownOptions) -> Result<ForceBreakdown> {
        let v = v.abs();
        let motion = self.moving(v)?;
        let f0 = self.f_equilibrium()?;
        let ds = motion.f_ds_detailed(false)?;
        let f_th = motion.f_th()?;
        let f_as = self.f_as(&Geometry::PlanarHalfSpace)?.value;
        let f_total = ds.force + f_th + ForceEstimate::new(f_as, 0.0);
        let f_ds_bare = if opts.bare_ds { Some(motion.f_ds_detailed(true)?.force) } else { None };
        let f_lte = if opts.lte { Some(ds.force + motion.f_th_lte()?) } else { None };
        let (f_th_highv, f_th_lowv) = if opts.asymptotes && v > 0.0 {
            (Some(motion.f_th_highv()?), Some(motion.f_th_lowv()))
        } else {
            (None, None)
        };

        let mut flags = Vec::new();
        let mut check = |name: &str, e: &ForceEstimate| {
            if e.flagged() {
                flags.push(format!("{name}: error estimate {:.2e} vs value {:.3e}", e.error, e.value));
            }
        };
        check("f_ds", &ds.force);
        check("f_th", &f_th);
        if let Some(e) = &f_ds_bare {
            check("f_ds_bare", e);
        }
        if let Some(e) = &f_lte {
            check("f_lte", e);
        }
        let tv = if v > 0.0 { motion.effective_temperature(self.particle.omega_a)?.t_v } else { 0.0 };
        Ok(ForceBreakdown {
            v,
            ttilde_over_ta: self.ttilde(v) / self.particle.omega_a,
            f0,
            f_ds: ds.force,
            f_th,
            f_as,
            f_total,
            f_ds_bare,
            f_lte,
            f_th_highv,
            f_th_lowv,
            diagnostics: Diagnostics {
                reality_residual: ds.reality_residual,
                tv_at_resonance_over_ta: tv / self.particle.omega_a,
                flags,
            },
        })
    }
}
