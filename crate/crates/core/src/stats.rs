//! Damping kernel, motion-induced effective temperature and the NESS power
//! spectrum.
//!
//! The damping kernel collects emission/absorption weight over the Doppler
//! window,
//!
//! ```text
//! D(ω, v) = α₀ [ ∫_{ω+qv>0} dq/2π Im G_s,zz(q, z_a, ω + qv) + θ(ω) ω³/(6π) ],
//! ```
//!
//! and satisfies `D(ω) − D(−ω) = α₀ Im Σ(ω)` for ω > 0. The effective
//! temperature follows from detailed balance, `D(ω)/D(−ω) = e^{ω/T_v(ω)}`.
//! D(−ω) decays like e^{−2ωz_a/v}; it is carried in logarithmic form so T_v
//! stays finite far into the ultraviolet.

use crate::error::{Error, Result};
use crate::green::{g_vacuum_im_zz, zz_kernel, zz_kernel_scaled};
use crate::particle::Motion;
use crate::quadrature::{integrate_lenient, QuadSpec};
use std::f64::consts::PI;

/// How the occupation entering the thermal-like force is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TvMode {
    /// Detailed-balance temperature at each frequency.
    #[default]
    Resolved,
    /// Constant T_v = (3/π)·v/(2z_a).
    FixedInfra,
    /// Constant T_v = v/(2z_a).
    FixedUv,
}

impl TvMode {
    pub fn parse(s: &str) -> Option<TvMode> {
        match s {
            "resolved" => Some(TvMode::Resolved),
            "fixed_infra" => Some(TvMode::FixedInfra),
            "fixed_uv" => Some(TvMode::FixedUv),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TvMode::Resolved => "resolved",
            TvMode::FixedInfra => "fixed_infra",
            TvMode::FixedUv => "fixed_uv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingKernel {
    pub omega: f64,
    pub v: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTemperature {
    pub omega: f64,
    pub v: f64,
    pub t_v: f64,
    /// λ with T_v = v/(2λ).
    pub lambda_eff: f64,
    /// ln[D(ω)/D(−ω)].
    pub log_ratio: f64,
    /// Set when D(−ω) vanishes to working precision; T_v is then reported as 0.
    pub degenerate: bool,
}

/// n_T(ω) = 1/(e^{ω/T} − 1), with n_T(−ω) = −1 − n_T(ω).
pub fn bose_occupation(t: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("Bose occupation needs a nonzero finite frequency, got {omega}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("temperature must be non-negative, got {t}")));
    }
    Ok(bose(t, omega))
}

#[inline]
pub(crate) fn bose(t: f64, omega: f64) -> f64 {
    if t == 0.0 {
        return if omega > 0.0 { 0.0 } else { -1.0 };
    }
    if omega > 0.0 {
        1.0 / (omega / t).exp_m1()
    } else {
        -1.0 - 1.0 / (-omega / t).exp_m1()
    }
}

/// ln(1 + e^t) without overflow.
#[inline]
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

impl Motion<'_> {
    fn kernel_spec(&self, a: f64, b: f64, points: impl IntoIterator<Item = f64>) -> QuadSpec {
        let tol = (0.01 * self.system.settings.rel_tol).clamp(1e-12, 1e-9);
        QuadSpec::with_rel_tol(tol).breakpoints_within(a, b, points)
    }

    /// D(ω) for ω > 0, by direct quadrature over the Doppler window.
    pub(crate) fn damping_positive(&self, u: f64) -> f64 {
        let sys = self.system;
        let (m, z, v) = (&sys.medium, sys.z_a, self.v);
        let a0 = sys.particle.alpha0;
        if v == 0.0 {
            return a0 * (m.reflection_imag_real(u) / (16.0 * PI * z * z * z) + g_vacuum_im_zz(u));
        }
        let qmax = sys.q_max();
        let wsp = m.surface_plasmon().re;
        let window = u / v;
        let spec = self.kernel_spec(0.0, qmax, [window, (wsp - u).abs() / v, (u - wsp).abs() / v, (u + wsp) / v]);
        let f = |q: f64| {
            let mut s = m.reflection_imag_real(u + q * v);
            if q < window {
                s += m.reflection_imag_real(u - q * v);
            }
            s * zz_kernel(q, z)
        };
        a0 * (integrate_lenient(f, 0.0, qmax, &spec).value / (4.0 * PI) + g_vacuum_im_zz(u))
    }

    /// ln D(−ω) for ω > 0 (−∞ at rest).
    pub(crate) fn damping_negative_ln(&self, u: f64) -> f64 {
        let sys = self.system;
        let (m, z, v) = (&sys.medium, sys.z_a, self.v);
        if v == 0.0 || sys.particle.alpha0 == 0.0 {
            return f64::NEG_INFINITY;
        }
        // q = u/v + s; the factor e^{−2(u/v)z} is pulled out analytically.
        let q0 = u / v;
        let smax = sys.q_max();
        let wsp = m.surface_plasmon().re;
        let spec = self.kernel_spec(0.0, smax, [wsp / v, (wsp + 0.5 * m.gamma) / v]);
        let f = |s: f64| m.reflection_imag_real(s * v) * zz_kernel_scaled(q0 + s, z) * (-2.0 * s * z).exp();
        let scaled = integrate_lenient(f, 0.0, smax, &spec).value / (4.0 * PI);
        if !(scaled > 0.0) {
            return f64::NEG_INFINITY;
        }
        (sys.particle.alpha0 * scaled).ln() - 2.0 * q0 * z
    }

    pub fn damping_kernel(&self, omega: f64) -> Result<DampingKernel> {
        if !omega.is_finite() {
            return Err(Error::Domain(format!("frequency {omega} is not finite")));
        }
        let value = if omega > 0.0 {
            self.damping_positive(omega)
        } else if omega < 0.0 {
            self.damping_negative_ln(-omega).exp()
        } else {
            // continuous limit from either side
            if self.v == 0.0 {
                0.0
            } else {
                self.damping_negative_ln(0.0).exp()
            }
        };
        Ok(DampingKernel { omega, v: self.v, value })
    }

    /// T_v(ω) = ω / ln[D(ω)/D(−ω)], using D(ω) = D(−ω) + α₀ Im Σ(ω).
    pub fn effective_temperature(&self, omega: f64) -> Result<EffectiveTemperature> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("effective temperature needs omega > 0, got {omega}")));
        }
        let v = self.v;
        if v == 0.0 {
            return Ok(EffectiveTemperature {
                omega,
                v,
                t_v: 0.0,
                lambda_eff: f64::NAN,
                log_ratio: f64::INFINITY,
                degenerate: false,
            });
        }
        let log_ratio = self.log_detailed_balance(omega);
        let degenerate = !log_ratio.is_finite();
        let t_v = if degenerate { 0.0 } else { omega / log_ratio };
        Ok(EffectiveTemperature { omega, v, t_v, lambda_eff: v / (2.0 * t_v), log_ratio, degenerate })
    }

    /// ln[D(ω)/D(−ω)] for ω > 0.
    fn log_detailed_balance(&self, u: f64) -> f64 {
        let p = self.system.particle.alpha0 * self.system.sigma_imag_real_axis(self.v, u);
        let ln_dm = self.damping_negative_ln(u);
        softplus(p.ln() - ln_dm)
    }

    /// Occupation n(ω), ω > 0, entering the thermal-like force.
    pub fn occupation(&self, u: f64) -> f64 {
        let ttilde = self.system.ttilde(self.v);
        match self.system.settings.tv_mode {
            TvMode::Resolved => {
                if self.v == 0.0 {
                    return 0.0;
                }
                let p = self.system.particle.alpha0 * self.system.sigma_imag_real_axis(self.v, u);
                (self.damping_negative_ln(u) - p.ln()).exp()
            }
            TvMode::FixedInfra => bose(3.0 / PI * ttilde, u),
            TvMode::FixedUv => bose(ttilde, u),
        }
    }

    /// S(ω, v) = |α(ω, v)|² D(ω, v) / (π α₀).
    pub fn power_spectrum(&self, omega: f64) -> Result<f64> {
        let d = self.damping_kernel(omega)?.value;
        if d == 0.0 {
            return Ok(0.0);
        }
        let (abs2, _) = self.alpha_abs2_and_im_sigma(omega);
        Ok(abs2 * d / (PI * self.system.particle.alpha0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bose_examples() {
        assert!((bose_occupation(1.0, 2f64.ln()).unwrap() - 1.0).abs() < 1e-15);
        let (t, w) = (0.3 * 1.45, 0.7 * 1.45);
        let s = bose_occupation(t, -w).unwrap() + bose_occupation(t, w).unwrap() + 1.0;
        assert!(s.abs() < 1e-15);
        let n = bose_occupation(100.0, 1.0).unwrap();
        assert!((n / 99.5 - 1.0).abs() < 0.01);
        assert_eq!(bose_occupation(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(bose_occupation(0.0, -1.0).unwrap(), -1.0);
        assert!(bose_occupation(1.0, 0.0).is_err());
    }

    #[test]
    fn softplus_is_stable() {
        assert_eq!(softplus(800.0), 800.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-16);
        assert!(softplus(-800.0) >= 0.0);
    }

    #[test]
    fn mode_names() {
        for m in [TvMode::Resolved, TvMode::FixedInfra, TvMode::FixedUv] {
            assert_eq!(TvMode::parse(m.as_str()), Some(m));
        }
        assert_eq!(TvMode::parse("hot"), None);
    }
}
