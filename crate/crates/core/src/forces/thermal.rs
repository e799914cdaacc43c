//! Thermal-like force F^Th and its asymptotes, and the static thermal analogue.
//!
//! In Doppler variables u = ω − qv the thermal-like force reads
//!
//! ```text
//! F^Th = 1/π ∫₀^∞ du α_I(u) [ n(u) H(u) + (1 + n(u)) H(−u) ],
//! H(u) = ∫_{q ≥ −u/v} dq/2π ∂_z G_R,zz(q, z_a, u + qv),
//! ```
//!
//! H(−u) being the anomalous-Doppler window, present even at n = 0.
//!
//! α_I carries a resonance of relative width ~10⁻⁷. Around ω_c the Lorentzian
//! W·L(u − ω_c)·f(ω_c) is subtracted on a window ±a and added back in closed
//! form, W f(ω_c)·(2/π)atan(a/h); the remainder is bounded and integrates
//! adaptively. Only the peak is modelled — the Lorentzian tails are *not*
//! carried to low frequencies, where the true α_I ≈ α_I′(0)u is of the same
//! order as the Lorentzian tail would be.

use super::ForceEstimate;
use crate::error::{Error, Result};
use crate::green::{zz_kernel_dz, zz_kernel_dz_scaled};
use crate::particle::Motion;
use crate::quadrature::{integrate_lenient, QuadSpec};
use crate::stats::{bose, TvMode};
use crate::system::System;
use std::f64::consts::PI;

/// Validity gate for the resonant (high-velocity) asymptote, T_v(ω_a)/T_a.
pub const HIGHV_GATE: f64 = 0.2;
/// Validity gate for the low-velocity closed form, T̃_v/T_a.
pub const LOWV_GATE: f64 = 1e-2;

/// Resonant asymptote of F^Th.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighVelocity {
    pub value: f64,
    /// ∝ n(ω_a): emission window q = (ω_a − ω)/v.
    pub emission: f64,
    /// ∝ n(ω_a) + 1: absorption window q = (ω_a + ω)/v.
    pub absorption: f64,
    /// The absorption term with coefficient 1, as in the LTE reading.
    pub absorption_lte: f64,
    /// Occupation-independent limit (T_v/2)·α₀[H(ω_a) + H(−ω_a)], for T_v ≫ ω_a.
    pub classical: f64,
    pub t_v: f64,
    pub occupation: f64,
    /// T_v(ω_a) < 0.2 T_a.
    pub extrapolated: bool,
}

/// Low-velocity closed form of F^Th, ∝ v²/z_a⁹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowVelocity {
    pub value: f64,
    /// (3/π)²-part, from the motion-induced occupation.
    pub thermal: f64,
    /// 15/π²-part, the anomalous-Doppler window (survives at n = 0).
    pub anomalous: f64,
    /// T̃_v/T_a > 10⁻².
    pub extrapolated: bool,
}

/// Force on a particle at rest, in equilibrium with a bath at temperature T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalAnalogue {
    pub t: f64,
    pub f_tilde: ForceEstimate,
    /// T = 0 part, bare polarizability.
    pub f_tilde_zero: ForceEstimate,
    /// Thermal correction F̃(T) − F̃(0).
    pub correction: ForceEstimate,
    /// F̃(0) + T²-law.
    pub f_tilde_low_t: f64,
    /// F̃(0) + resonant classical term.
    pub f_tilde_high_t: f64,
}

impl Motion<'_> {
    /// H(u) for u > 0.
    pub(crate) fn window_positive(&self, u: f64) -> f64 {
        let sys = self.system;
        let (m, z, v) = (&sys.medium, sys.z_a, self.v);
        if v == 0.0 {
            return -3.0 * m.reflection_re_real(u) / (16.0 * PI * z.powi(4));
        }
        let qmax = sys.q_max();
        let wsp = m.surface_plasmon().re;
        let window = u / v;
        let tol = (0.01 * sys.settings.rel_tol).clamp(1e-12, 1e-9);
        let points = [window, (wsp - u).abs() / v, (u + wsp) / v, ((wsp - u).abs() + 0.5 * m.gamma) / v];
        let spec = QuadSpec::with_rel_tol(tol).breakpoints_within(0.0, qmax, points);
        let f = |q: f64| {
            let mut s = m.reflection_re_real(u + q * v);
            if q < window {
                s += m.reflection_re_real(u - q * v);
            }
            s * zz_kernel_dz(q, z)
        };
        integrate_lenient(f, 0.0, qmax, &spec).value / (4.0 * PI)
    }

    /// H(−u) for u > 0: the window q > u/v, where ω = qv − u.
    pub(crate) fn window_negative(&self, u: f64) -> f64 {
        let sys = self.system;
        let (m, z, v) = (&sys.medium, sys.z_a, self.v);
        if v == 0.0 {
            return 0.0;
        }
        let q0 = u / v;
        let damp = (-2.0 * q0 * z).exp();
        if damp == 0.0 {
            return 0.0;
        }
        let smax = sys.q_max();
        let wsp = m.surface_plasmon().re;
        let tol = (0.01 * sys.settings.rel_tol).clamp(1e-12, 1e-9);
        let spec = QuadSpec::with_rel_tol(tol).breakpoints_within(0.0, smax, [wsp / v, (wsp + 0.5 * m.gamma) / v]);
        let f = |s: f64| m.reflection_re_real(s * v) * zz_kernel_dz_scaled(q0 + s, z) * (-2.0 * s * z).exp();
        damp * integrate_lenient(f, 0.0, smax, &spec).value / (4.0 * PI)
    }

    /// ∫₀^U α_I(u)·f(u) du where `integrand` returns the product and
    /// `f_center` = f(ω_c). The ω_c peak is handled by a windowed Lorentzian
    /// control variate.
    pub(crate) fn resonant_integral(
        &self,
        integrand: impl Fn(f64) -> f64,
        f_center: f64,
        upper: f64,
        extra_points: &[f64],
        context: &'static str,
    ) -> Result<ForceEstimate> {
        let split = self.lorentzian_split(1)?;
        let (wc, h, w) = (split.center, split.half_width, split.weight);
        let wa = self.system.particle.omega_a;
        let a = split.window;
        let upper = upper.max(wc + 2.0 * a);
        let g = |u: f64| integrand(u) - f_center * split.peak(u);
        let mut pts: Vec<f64> = vec![wc, wc - a, wc + a];
        let mut d = h;
        while d < a {
            pts.extend([wc - d, wc + d]);
            d *= 4.0;
        }
        pts.extend_from_slice(extra_points);
        let wsp = self.system.medium.surface_plasmon().re;
        pts.extend([1e-3 * wa, 0.1 * wa, 0.5 * wa, 2.0 * wa, wsp, self.system.medium.omega_p]);
        let spec = QuadSpec::with_rel_tol(self.system.settings.rel_tol).breakpoints_within(0.0, upper, pts);
        let body = super::outer(g, 0.0, upper, &spec, context)?;
        let peak = w * f_center * (2.0 / PI) * (a / h).atan();
        Ok(ForceEstimate::new(body.value + peak, body.error))
    }

    fn thermal_points(&self) -> Vec<f64> {
        let t = self.system.ttilde(self.v);
        [0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0].iter().map(|k| k * t).collect()
    }

    fn thermal_upper(&self) -> f64 {
        let sys = self.system;
        (300.0 * sys.ttilde(self.v)).min(sys.freq_max())
    }

    /// Occupation n(u) alongside α_I(u), sharing Im Σ.
    fn alpha_i_and_occupation(&self, u: f64) -> (f64, f64) {
        let (abs2, im) = self.alpha_abs2_and_im_sigma(u);
        let n = match self.system.settings.tv_mode {
            TvMode::Resolved => {
                let p = self.system.particle.alpha0 * im;
                (self.damping_negative_ln(u) - p.ln()).exp()
            }
            _ => self.occupation(u),
        };
        (abs2 * im, n)
    }

    /// F^Th, full route.
    pub fn f_th(&self) -> Result<ForceEstimate> {
        if self.v == 0.0 {
            return Ok(ForceEstimate::ZERO);
        }
        let f = |u: f64, n: f64| n * self.window_positive(u) + (1.0 + n) * self.window_negative(u);
        let wc = self.resonance()?;
        let fc = f(wc, self.occupation(wc));
        let integrand = |u: f64| {
            let (ai, n) = self.alpha_i_and_occupation(u);
            ai * f(u, n)
        };
        Ok(self.resonant_integral(integrand, fc, self.thermal_upper(), &self.thermal_points(), "F^Th")? * (1.0 / PI))
    }

    /// F^Th with n = 0: the anomalous-Doppler window alone.
    pub fn f_th_lte(&self) -> Result<ForceEstimate> {
        if self.v == 0.0 {
            return Ok(ForceEstimate::ZERO);
        }
        let wc = self.resonance()?;
        let fc = self.window_negative(wc);
        let integrand = |u: f64| self.alpha_imag_unchecked(u) * self.window_negative(u);
        Ok(self.resonant_integral(integrand, fc, self.thermal_upper(), &self.thermal_points(), "F^Th (LTE)")? * (1.0 / PI))
    }

    /// F^LTE = F^Ds + F^Th|_{n=0}.
    pub fn f_lte(&self) -> Result<ForceEstimate> {
        Ok(self.f_ds()? + self.f_th_lte()?)
    }

    /// Resonant asymptote: α_I → (πα₀ω_a/2)δ(u − ω_a).
    pub fn f_th_highv(&self) -> Result<HighVelocity> {
        let wa = self.system.particle.omega_a;
        let a0 = self.system.particle.alpha0;
        if self.v == 0.0 {
            return Ok(HighVelocity {
                value: 0.0,
                emission: 0.0,
                absorption: 0.0,
                absorption_lte: 0.0,
                classical: 0.0,
                t_v: 0.0,
                occupation: 0.0,
                extrapolated: true,
            });
        }
        let ttilde = self.system.ttilde(self.v);
        let t_v = match self.system.settings.tv_mode {
            TvMode::Resolved => self.effective_temperature(wa)?.t_v,
            TvMode::FixedInfra => 3.0 / PI * ttilde,
            TvMode::FixedUv => ttilde,
        };
        let n = bose(t_v, wa);
        let (hp, hm) = (self.window_positive(wa), self.window_negative(wa));
        let pref = 0.5 * a0 * wa;
        let emission = pref * n * hp;
        let absorption = pref * (n + 1.0) * hm;
        Ok(HighVelocity {
            value: emission + absorption,
            emission,
            absorption,
            absorption_lte: pref * hm,
            classical: 0.5 * t_v * a0 * (hp + hm),
            t_v,
            occupation: n,
            extrapolated: t_v < HIGHV_GATE * wa,
        })
    }

    /// Closed form −[(3/π)² + 15/π²]·(1/π)(α₀/2)²·v²/(2z_a)⁹·r′_I(0)·r(0).
    pub fn f_th_lowv(&self) -> LowVelocity {
        let sys = self.system;
        let v = self.v;
        let a0 = sys.particle.alpha0;
        let c = (0.5 * a0).powi(2) * v * v / (2.0 * sys.z_a).powi(9) * sys.medium.reflection_imag_slope_at_zero() / PI;
        let thermal = -(3.0 / PI).powi(2) * c;
        let anomalous = -15.0 / (PI * PI) * c;
        LowVelocity {
            value: thermal + anomalous,
            thermal,
            anomalous,
            extrapolated: sys.ttilde(v) / sys.particle.omega_a > LOWV_GATE,
        }
    }
}

impl System {
    /// Static thermal analogue F̃(T): bare T = 0 part plus the thermal
    /// correction 1/π ∫dω n_T(ω) α_I(ω, 0) ∂_z Re G_loc(ω).
    pub fn f_static_thermal(&self, t: f64) -> Result<ThermalAnalogue> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("temperature must be non-negative, got {t}")));
        }
        let f0 = self.f_equilibrium_bare()?;
        let wa = self.particle.omega_a;
        let a0 = self.particle.alpha0;
        let z4 = self.z_a.powi(4);
        let grad = |u: f64| -3.0 * self.medium.reflection_re_real(u) / (16.0 * PI * z4);
        let correction = if t == 0.0 {
            ForceEstimate::ZERO
        } else {
            let motion = self.moving(0.0)?;
            let f = |u: f64| bose(t, u) * grad(u);
            let wc = motion.resonance()?;
            let pts: Vec<f64> = [0.1, 1.0, 3.0, 10.0, 30.0].iter().map(|k| k * t).collect();
            let upper = (200.0 * t).min(self.freq_max());
            let integrand = |u: f64| motion.alpha_imag_unchecked(u) * f(u);
            motion.resonant_integral(integrand, f(wc), upper, &pts, "static thermal correction")? * (1.0 / PI)
        };
        // α_I′(0, 0) = α(0,0)²·r′_I(0)/(16π z³)
        let alpha_static = a0 / (1.0 - self.coupling());
        let slope = alpha_static * alpha_static * self.medium.reflection_imag_slope_at_zero() / (16.0 * PI * self.z_a.powi(3));
        let low = f0.value + PI * t * t / 6.0 * slope * (-3.0 / (16.0 * PI * z4));
        let high = f0.value + 0.5 * wa * if t > 0.0 { bose(t, wa) } else { 0.0 } * a0 * grad(wa);
        Ok(ThermalAnalogue { t, f_tilde: f0 + correction, f_tilde_zero: f0, correction, f_tilde_low_t: low, f_tilde_high_t: high })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::DrudeModel;

    /// With the medium loss enlarged ×1000 the resonance is wide enough for
    /// plain adaptive quadrature over a dense breakpoint grid; the windowed
    /// control variate must reproduce it.
    #[test]
    fn control_variate_matches_dense_grid_at_enlarged_loss() {
        let base = System::reference();
        let m = base.medium;
        let sys = base.with_medium(DrudeModel::new(m.omega_p, 1000.0 * m.gamma).unwrap());
        let motion = sys.moving(sys.velocity_for_ttilde_ratio(1.0)).unwrap();
        let split = motion.lorentzian_split(1).unwrap();
        assert!(split.half_width / sys.particle.omega_a > 1e-6);

        let split_route = motion.f_th().unwrap();

        let f = |u: f64, n: f64| n * motion.window_positive(u) + (1.0 + n) * motion.window_negative(u);
        let integrand = |u: f64| {
            let (ai, n) = motion.alpha_i_and_occupation(u);
            ai * f(u, n)
        };
        let (wc, h) = (split.center, split.half_width);
        let mut pts: Vec<f64> = motion.thermal_points();
        for k in -400..=400 {
            pts.push(wc + 0.25 * h * k as f64);
        }
        let upper = motion.thermal_upper();
        let spec = QuadSpec::with_rel_tol(1e-9).breakpoints_within(0.0, upper, pts);
        let dense = integrate_lenient(integrand, 0.0, upper, &spec).value / PI;
        let rel = (split_route.value - dense).abs() / dense.abs();
        assert!(rel < 1e-5, "split {} dense {dense} rel {rel:e}", split_route.value);
    }
}
