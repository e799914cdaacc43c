//! Equilibrium force and the Wick-rotated part F^Ds.
//!
//! ```text
//! F^Ds = 1/2π ∫₀^∞ dξ ∫dq/2π α(iξ − qv, v) ∂_z G_s,zz(q, z_a, iξ)
//! ```
//!
//! Folding q → −q gives the even combination α_e = [α(iξ−qv) + α(iξ+qv)]/2,
//! real by the crossing relation. The static piece α(iξ, 0) is subtracted
//! under the integral and added back through the local (q-integrated) form,
//! so only the small motional change is integrated over the (ξ, q) plane.

use super::{outer, ForceEstimate};
use crate::error::{Error, Result};
use crate::green::zz_kernel_dz;
use crate::particle::Motion;
use crate::quadrature::{integrate_lenient, QuadSpec};
use crate::system::System;
use num_complex::Complex64;
use std::f64::consts::PI;

/// F^Ds with its imaginary residue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsResult {
    pub force: ForceEstimate,
    /// F^Ds − F0 (or F^Ds − F_bare on the bare route).
    pub motional: ForceEstimate,
    /// Largest |Im|/|Re| of the ξ-integrand with both Doppler branches
    /// evaluated independently.
    pub reality_residual: f64,
}

impl System {
    /// α(iξ, 0), dressed by the static local self-energy.
    pub(crate) fn alpha_static_imag_axis(&self, xi: f64) -> f64 {
        let z = self.z_a;
        let sigma = self.medium.reflection_imag_axis(xi) / (16.0 * PI * z * z * z) + xi * xi * xi / (6.0 * PI);
        let a0 = self.particle.alpha0;
        let wa2 = self.particle.omega_a * self.particle.omega_a;
        a0 * wa2 / (wa2 + xi * xi - a0 * wa2 * sigma)
    }

    fn xi_points(&self) -> Vec<f64> {
        let wa = self.particle.omega_a;
        let mut p: Vec<f64> = (0..7).map(|k| wa * 10f64.powi(-k)).collect();
        p.extend([self.medium.surface_plasmon().re, self.medium.omega_p, 5.0 * self.medium.omega_p]);
        p
    }

    /// ∫₀^Ξ f plus the algebraic ξ⁻⁴ tail f(Ξ)Ξ/3.
    fn equilibrium_integral(&self, alpha: impl Fn(f64) -> f64) -> Result<ForceEstimate> {
        let z = self.z_a;
        let big = self.freq_max();
        let f = |xi: f64| alpha(xi) * (-3.0 * self.medium.reflection_imag_axis(xi) / (16.0 * PI * z.powi(4))) / (2.0 * PI);
        let tol = (0.1 * self.settings.rel_tol).max(1e-13);
        let spec = QuadSpec::with_rel_tol(tol).breakpoints_within(0.0, big, self.xi_points());
        let body = outer(&f, 0.0, big, &spec, "equilibrium force")?;
        let tail = f(big) * big / 3.0;
        Ok(ForceEstimate::new(body.value + tail, body.error + 0.1 * tail.abs()))
    }

    /// F0: the v = 0 force with the dressed polarizability.
    pub fn f_equilibrium(&self) -> Result<ForceEstimate> {
        self.f0_cache.get_or_init(|| self.equilibrium_integral(|xi| self.alpha_static_imag_axis(xi))).clone()
    }

    /// v = 0 force with the bare polarizability.
    pub fn f_equilibrium_bare(&self) -> Result<ForceEstimate> {
        self.f_bare_cache
            .get_or_init(|| self.equilibrium_integral(|xi| self.particle.alpha_bare_imag_axis(xi)))
            .clone()
    }

    /// ∫dq/2π q² ∂_z G_s,zz(q, iξ) / r(iξ), by quadrature (closed form
    /// −15/(32π z_a⁶)).
    pub fn second_moment_dz(&self) -> f64 {
        let z = self.z_a;
        // the kernel is e^{−80} below its peak beyond x = 2qz = 80
        let spec = QuadSpec::with_rel_tol(1e-12).breakpoints_within(0.0, 40.0 / z, [0.5 / z, 2.5 / z]);
        let f = |q: f64| q * q * zz_kernel_dz(q, z);
        let half = integrate_lenient(f, 0.0, 40.0 / z, &spec).value;
        // (1/2π)·2·∫₀^∞ · (r/2)
        0.5 * half / PI
    }

    /// F^Ds at a signed velocity, integrating the unfolded q-line
    /// [−q_max, q_max] with α(iξ − qv) and no ±q symmetrization. Slow; an
    /// orientation-independent cross-check of the folded route.
    pub fn f_ds_unfolded(&self, v: f64) -> Result<ForceEstimate> {
        let motion = self.moving(v)?;
        let f0 = self.f_equilibrium()?;
        if v == 0.0 {
            return Ok(f0);
        }
        let qmax = self.q_max();
        let wc = motion.resonance().unwrap_or(self.particle.omega_a);
        let rel = self.settings.rel_tol;
        let z = self.z_a;
        let scale = 1.0 / (2.0 * z);
        let mid = |xi: f64| {
            let r = self.medium.reflection_imag_axis(xi);
            let a_static = self.alpha_static_imag_axis(xi);
            let qr = (wc * wc + xi * xi).sqrt() / v;
            let points = [0.0, qr, -qr, 2.0 * scale, -2.0 * scale];
            let spec = QuadSpec::with_rel_tol((0.1 * rel).max(1e-11)).breakpoints_within(-qmax, qmax, points);
            let g = |q: f64| {
                let w = Complex64::new(-q * v, xi);
                self.alpha_shift(motion.v, w, xi, a_static).re * zz_kernel_dz_safe(q, z)
            };
            integrate_lenient(g, -qmax, qmax, &spec).value * (0.5 * r / (4.0 * PI * PI))
        };
        let big = self.freq_max();
        let spec = QuadSpec::with_rel_tol(rel).breakpoints_within(0.0, big, self.xi_points());
        Ok(f0 + outer(mid, 0.0, big, &spec, "unfolded F^Ds")?)
    }
}

impl Motion<'_> {
    /// F^Ds (dressed).
    pub fn f_ds(&self) -> Result<ForceEstimate> {
        Ok(self.f_ds_detailed(false)?.force)
    }

    /// F^Ds with α replaced by the bare polarizability.
    pub fn f_ds_bare(&self) -> Result<ForceEstimate> {
        Ok(self.f_ds_detailed(true)?.force)
    }

    pub fn f_ds_detailed(&self, bare: bool) -> Result<DsResult> {
        let sys = self.system;
        let base = if bare { sys.f_equilibrium_bare()? } else { sys.f_equilibrium()? };
        let v = self.v;
        if v == 0.0 {
            return Ok(DsResult { force: base, motional: ForceEstimate::ZERO, reality_residual: 0.0 });
        }
        let z = sys.z_a;
        let qmax = sys.q_max();
        let wa = sys.particle.omega_a;
        let wc = if bare { wa } else { self.resonance().unwrap_or(wa) };
        let wsp = sys.medium.surface_plasmon().re;
        let rel = sys.settings.rel_tol;
        let mid_tol = (0.1 * rel).max(1e-11);
        // α(ω′) − α(iξ, 0) at ω′ = iξ ∓ qv
        let shift = |w: Complex64, xi: f64, a_static: f64| -> Complex64 {
            if bare {
                let wa2 = wa * wa;
                let w0 = Complex64::new(0.0, xi);
                sys.particle.alpha0 * wa2 * (w - w0) * (w + w0) / ((wa2 - w * w) * (wa2 + xi * xi))
            } else {
                sys.alpha_shift(v, w, xi, a_static)
            }
        };
        let alpha_static = |xi: f64| if bare { sys.particle.alpha_bare_imag_axis(xi) } else { sys.alpha_static_imag_axis(xi) };
        let scale = 1.0 / (2.0 * z);
        // (1/2π)·(1/π)·(r/2) ∫₀ [α_e − α(iξ,0)] ∂k/∂z dq. With `both`, the two
        // branches iξ ∓ qv are evaluated independently and the imaginary part
        // of their mean is kept; otherwise the crossing relation
        // α(iξ − qv) = α(iξ + qv)* leaves Re α(iξ + qv).
        let mid = |xi: f64, both: bool| -> Complex64 {
            let r = sys.medium.reflection_imag_axis(xi);
            let a_static = alpha_static(xi);
            let qr = (wc * wc + xi * xi).sqrt() / v;
            let points = [qr, wa / v, wsp / v, 0.5 * scale, 2.0 * scale, 5.0 * scale];
            let spec = QuadSpec::with_rel_tol(mid_tol).breakpoints_within(0.0, qmax, points);
            let norm = 0.5 * r / (2.0 * PI * PI);
            if both {
                let g = |q: f64| {
                    let minus = shift(Complex64::new(-q * v, xi), xi, a_static);
                    let plus = shift(Complex64::new(q * v, xi), xi, a_static);
                    0.5 * (minus + plus) * zz_kernel_dz_safe(q, z)
                };
                integrate_lenient(g, 0.0, qmax, &spec).value * norm
            } else {
                let g = |q: f64| shift(Complex64::new(q * v, xi), xi, a_static).re * zz_kernel_dz_safe(q, z);
                Complex64::new(integrate_lenient(g, 0.0, qmax, &spec).value * norm, 0.0)
            }
        };
        let big = sys.freq_max();
        let spec = QuadSpec::with_rel_tol(rel).breakpoints_within(0.0, big, sys.xi_points());
        let motional = outer(|xi| mid(xi, false).re, 0.0, big, &spec, "motional F^Ds")?;
        let force = base + motional;
        // imaginary residue of the ξ-integrand, probed at the ξ breakpoints
        let reality_residual = sys
            .xi_points()
            .into_iter()
            .map(|xi| {
                let m = mid(xi, true);
                m.im.abs() / m.re.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        if !(reality_residual <= super::REALITY_TOLERANCE) {
            return Err(Error::RealityViolation(reality_residual));
        }
        Ok(DsResult { force, motional, reality_residual })
    }

    /// Small-velocity expansion of F^Ds to O(v²), with the bare curvature
    /// α″(iξ) and the q²-moment of ∂_z G by quadrature.
    pub fn f_ds_lowv(&self) -> Result<ForceEstimate> {
        let sys = self.system;
        let f0 = sys.f_equilibrium()?;
        let v = self.v;
        if v == 0.0 {
            return Ok(f0);
        }
        let moment = sys.second_moment_dz();
        let big = sys.freq_max();
        let spec = QuadSpec::with_rel_tol(sys.settings.rel_tol).breakpoints_within(0.0, big, sys.xi_points());
        let f = |xi: f64| sys.particle.alpha_bare_curvature(xi) * sys.medium.reflection_imag_axis(xi);
        let xi_int = outer(f, 0.0, big, &spec, "low-velocity F^Ds")?;
        Ok(f0 + xi_int * (0.5 * v * v * moment / (2.0 * PI)))
    }

    /// F^Ds by the spectral route: α_e rebuilt from α_I on the real axis by
    /// the dispersion relation, with the resonance handled in closed form.
    /// Independent of the complex-frequency self-energy; coarse `rel_tol`.
    pub fn f_ds_spectral(&self, rel_tol: f64) -> Result<ForceEstimate> {
        let sys = self.system;
        let v = self.v;
        if v == 0.0 {
            return sys.f_equilibrium();
        }
        let split = self.lorentzian_split(1)?;
        let (wc, h, w_peak) = (split.center, split.half_width, split.weight);
        let z = sys.z_a;
        let qmax = sys.q_max();
        let big = sys.freq_max();
        let xi_spec = |pts: &[f64]| QuadSpec::with_rel_tol(rel_tol).breakpoints_within(0.0, big, sys.xi_points().into_iter().chain(pts.iter().copied()));
        let scale = 1.0 / (2.0 * z);
        let wsp = sys.medium.surface_plasmon().re;

        // Peak: (W/π)·Re[1/(ω_c − ih − ω′) + 1/(ω_c + ih + ω′)] at ω′ = ∓qv + iξ.
        let peak_alpha = |q: f64, xi: f64| {
            let num = Complex64::new(w_peak / PI, 0.0);
            let pole = Complex64::new(wc, -h);
            let e = |w: Complex64| (num / (pole - w) + num / (pole.conj() + w)).re;
            0.5 * (e(Complex64::new(-q * v, xi)) + e(Complex64::new(q * v, xi)))
        };
        let peak_mid = |xi: f64| {
            let r = sys.medium.reflection_imag_axis(xi);
            let qr = (wc * wc + xi * xi).sqrt() / v;
            let spec = QuadSpec::with_rel_tol(0.1 * rel_tol).breakpoints_within(0.0, qmax, [qr, 0.5 * scale, 2.0 * scale, 5.0 * scale]);
            let g = |q: f64| peak_alpha(q, xi) * zz_kernel_dz_safe(q, z);
            integrate_lenient(g, 0.0, qmax, &spec).value * (0.5 * r / (2.0 * PI * PI))
        };
        let peak = outer(peak_mid, 0.0, big, &xi_spec(&[h, 10.0 * h]), "spectral F^Ds (peak)")?;

        // Residual spectrum, ω-outermost: F = (2/π)∫dω ω ρ(ω) K(ω),
        // K(ω) = 1/2π ∫dξ (r/2)/π ∫dq ∂k/∂z · Re[1/(ω² − (iξ − qv)²)]_even.
        let residual = |w: f64| {
            self.alpha_imag_unchecked(w) - w_peak * (split.lorentzian(w) - split.mirrored().lorentzian(w))
        };
        let kernel = |w: f64| {
            let mid = |xi: f64| {
                let r = sys.medium.reflection_imag_axis(xi);
                let qr = (w * w + xi * xi).sqrt() / v;
                let spec = QuadSpec::with_rel_tol(0.1 * rel_tol).breakpoints_within(0.0, qmax, [qr, 0.5 * scale, 2.0 * scale, 5.0 * scale]);
                let g = |q: f64| {
                    let re = |s: f64| {
                        let a = w * w + xi * xi - q * q * v * v;
                        let b = 2.0 * xi * q * v * s;
                        a / (a * a + b * b)
                    };
                    // both Doppler signs give the same real part
                    re(1.0) * zz_kernel_dz_safe(q, z)
                };
                integrate_lenient(g, 0.0, qmax, &spec).value * (0.5 * r / (2.0 * PI * PI))
            };
            let spec = QuadSpec::with_rel_tol(0.1 * rel_tol).breakpoints_within(0.0, big, sys.xi_points().into_iter().chain([w]));
            integrate_lenient(mid, 0.0, big, &spec).value
        };
        let wa = sys.particle.omega_a;
        let mut wpts: Vec<f64> = vec![wc, wc - 30.0 * h, wc + 30.0 * h, wc - 1e3 * h, wc + 1e3 * h, 0.1 * wa, wsp, sys.medium.omega_p];
        wpts.extend([wsp - v * scale, wsp + v * scale, wa + v * scale, (wa - v * scale).abs()]);
        let spec = QuadSpec::with_rel_tol(rel_tol).breakpoints_within(0.0, big, wpts);
        let res = outer(|w| 2.0 / PI * w * residual(w) * kernel(w), 0.0, big, &spec, "spectral F^Ds (residual)")?;
        Ok(peak + res)
    }
}

/// ∂k/∂z, through the scaled form at large argument to avoid wasted
/// underflowing Bessel work.
#[inline]
fn zz_kernel_dz_safe(q: f64, z: f64) -> f64 {
    let x = 2.0 * q * z;
    if x > 700.0 {
        return 0.0;
    }
    zz_kernel_dz(q, z)
}

