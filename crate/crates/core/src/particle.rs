//! Bare and dressed polarizability of the moving harmonic dipole.
//!
//! The dressed response is
//!
//! ```text
//! α(ω, v) = α₀ω_a² / (ω_a² − ω² − α₀ω_a² Σ(ω, v)),
//! Σ(ω, v) = ∫dq/2π G_s,zz(q, z_a, ω + qv) + iω³/(6π).
//! ```
//!
//! Only the imaginary (radiation-reaction) part of the vacuum self-energy is
//! kept, at the unshifted frequency; its real part is taken as absorbed into
//! ω_a. Off the real axis `iω³/(6π)` is continued analytically.
//!
//! Velocity-dependent quantities live on [`Motion`], which can only be built
//! once a [`PassivityCertificate`] has been issued for that velocity.

use crate::error::{Error, Result};
use crate::green::{g_vacuum_im_zz, zz_kernel};
use crate::quadrature::{integrate_lenient, QuadSpec};
use crate::system::{System, MAX_BETA};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

/// Undamped harmonic dipole, α(ω) = α₀ω_a²/(ω_a² − ω²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub omega_a: f64,
    /// Static polarizability, eV⁻³ (ε₀ = 1).
    pub alpha0: f64,
}

impl Oscillator {
    pub fn alpha_bare(&self, omega: Complex64) -> Result<Complex64> {
        let wa = self.omega_a;
        if omega.im == 0.0 && ((omega.re - wa).abs() < 1e-12 * wa || (omega.re + wa).abs() < 1e-12 * wa) {
            return Err(Error::Pole(omega.re));
        }
        Ok(self.alpha0 * wa * wa / (wa * wa - omega * omega))
    }

    /// α(iξ), real.
    #[inline]
    pub fn alpha_bare_imag_axis(&self, xi: f64) -> f64 {
        let wa2 = self.omega_a * self.omega_a;
        self.alpha0 * wa2 / (wa2 + xi * xi)
    }

    /// α″(iξ) ≡ −d²α(iξ)/dξ² = α₀ω_a²(2ω_a² − 6ξ²)/(ω_a² + ξ²)³.
    pub fn alpha_bare_curvature(&self, xi: f64) -> f64 {
        let wa2 = self.omega_a * self.omega_a;
        let d = wa2 + xi * xi;
        self.alpha0 * wa2 * (2.0 * wa2 - 6.0 * xi * xi) / (d * d * d)
    }
}

/// Dressed polarizability at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityEval {
    pub omega: Complex64,
    pub v: f64,
    pub z_a: f64,
    pub value: Complex64,
    /// Σ(ω, v), scattered plus vacuum; the denominator term is α₀ω_a²Σ.
    pub self_energy: Complex64,
}

/// Positivity of α₀ Im Σ(ω, v) on a log grid, for one velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct PassivityCertificate {
    pub v: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub grid_points: usize,
    /// Smallest α₀ Im Σ(ω, v)/ω found on the grid.
    pub min_value: f64,
    pub argmin: f64,
}

#[derive(Debug, Default)]
pub(crate) struct CertificateCache(RwLock<HashMap<u64, Arc<PassivityCertificate>>>);

impl CertificateCache {
    fn get(&self, v: f64) -> Option<Arc<PassivityCertificate>> {
        self.0.read().unwrap_or_else(|e| e.into_inner()).get(&v.to_bits()).cloned()
    }

    fn insert(&self, cert: PassivityCertificate) -> Arc<PassivityCertificate> {
        let mut map = self.0.write().unwrap_or_else(|e| e.into_inner());
        map.entry(cert.v.to_bits()).or_insert_with(|| Arc::new(cert)).clone()
    }
}

/// Lorentzian model of one resonance peak of α_I:
/// `α_I ≈ weight · L(ω − center)`, `L(x) = (h/π)/(x² + h²)`, applied on
/// `|ω − center| < window` only. Far out, α_I is of the same order as the
/// Lorentzian tail itself, so the tail is not subtracted there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianSplit {
    pub center: f64,
    pub half_width: f64,
    pub weight: f64,
    /// Half width of the subtraction window.
    pub window: f64,
    /// Half width from the half-maximum scan.
    pub half_width_scan: f64,
    /// Half width from the peak curvature.
    pub half_width_curvature: f64,
}

impl LorentzianSplit {
    /// Unit-area Lorentzian L(ω − center).
    #[inline]
    pub fn lorentzian(&self, omega: f64) -> f64 {
        lorentz(omega - self.center, self.half_width)
    }

    /// The windowed peak weight·L on |ω − center| < window, zero outside.
    pub fn peak(&self, omega: f64) -> f64 {
        if (omega - self.center).abs() < self.window {
            self.weight * self.lorentzian(omega)
        } else {
            0.0
        }
    }

    /// Same peak on the other side of the crossing relation.
    pub fn mirrored(&self) -> LorentzianSplit {
        LorentzianSplit { center: -self.center, weight: -self.weight, ..*self }
    }
}

#[inline]
pub(crate) fn lorentz(x: f64, h: f64) -> f64 {
    h / PI / (x * x + h * h)
}

/// A system at fixed velocity `v ≥ 0`, with its passivity certificate.
#[derive(Debug)]
pub struct Motion<'a> {
    pub system: &'a System,
    pub v: f64,
    certificate: Arc<PassivityCertificate>,
    split: OnceLock<Result<LorentzianSplit>>,
}

const PASSIVITY_GRID: usize = 241;

#[derive(Clone, Copy)]
enum Part {
    Both,
    Re,
    Im,
}

impl System {
    /// Certifies α₀ Im Σ(ω, v) > 0 on ω ∈ [10⁻⁶, 50]·ω_a. Cached per velocity.
    pub fn passivity_certificate(&self, v: f64) -> Result<Arc<PassivityCertificate>> {
        let v = v.abs();
        if let Some(c) = self.certificates.get(v) {
            return Ok(c);
        }
        let wa = self.particle.omega_a;
        let (lo, hi) = (1e-6 * wa, 50.0 * wa);
        let mut min_value = f64::INFINITY;
        let mut argmin = lo;
        for i in 0..PASSIVITY_GRID {
            let w = lo * (hi / lo).powf(i as f64 / (PASSIVITY_GRID - 1) as f64);
            let p = self.particle.alpha0 * self.sigma_imag_real_axis(v, w);
            if !(p > 0.0) {
                return Err(Error::Stability { omega: w, value: p });
            }
            if p / w < min_value {
                min_value = p / w;
                argmin = w;
            }
        }
        Ok(self.certificates.insert(PassivityCertificate {
            v,
            omega_min: lo,
            omega_max: hi,
            grid_points: PASSIVITY_GRID,
            min_value,
            argmin,
        }))
    }

    /// Certified view at velocity |v|.
    pub fn moving(&self, v: f64) -> Result<Motion<'_>> {
        let v = v.abs();
        if !(v < MAX_BETA) {
            return Err(Error::Validation(format!("velocity {v} outside the nonrelativistic range")));
        }
        let certificate = self.passivity_certificate(v)?;
        Ok(Motion { system: self, v, certificate, split: OnceLock::new() })
    }

    fn sigma_tol(&self) -> f64 {
        (0.01 * self.settings.rel_tol).clamp(1e-12, 1e-9)
    }

    /// Σ enters α(ω′) − α(iξ, 0) only at relative weight O(g) against the
    /// kinematic ω′² + ξ², so the shift tolerates a much looser Σ.
    fn sigma_shift_tol(&self) -> f64 {
        self.settings.rel_tol.clamp(1e-10, 1e-6)
    }

    /// Poles in q of r(ω + qv) + r(ω − qv) (residue, position), using
    /// r(ω) = C[1/(ω − ω₊) − 1/(ω − ω₋)], ω± = ±ω_sp − iγ/2, C = −ω_p²/(4ω_sp).
    /// Only poles sitting over [0, q_max] are returned.
    fn doppler_poles(&self, v: f64, omega: Complex64) -> [Option<(Complex64, Complex64)>; 4] {
        let m = &self.medium;
        let sp = m.surface_plasmon();
        let mut out = [None; 4];
        if !(sp.re > 0.0) {
            return out;
        }
        let c = Complex64::new(-m.omega_p * m.omega_p / (4.0 * sp.re) / v, 0.0);
        let (wp, wm) = (sp, Complex64::new(-sp.re, sp.im));
        let qmax = self.q_max();
        let cands = [(c, (wp - omega) / v), (-c, (wm - omega) / v), (-c, (omega - wp) / v), (c, (omega - wm) / v)];
        for (slot, (res, p)) in out.iter_mut().zip(cands) {
            if p.re >= 0.0 && p.re <= qmax && p.im.abs() < qmax {
                *slot = Some((res, p));
            }
        }
        out
    }

    /// ∫₀^{q_max} dq k(q)[r(ω + qv) + r(ω − qv) − 2 r₀], v > 0, with the
    /// plasmon poles subtracted and added back in closed form. `part`
    /// selects which component the adaptive error control acts on.
    fn doppler_sum(&self, v: f64, omega: Complex64, r0: f64, part: Part, tol: f64) -> Complex64 {
        let z = self.z_a;
        let m = &self.medium;
        let qmax = self.q_max();
        let poles = self.doppler_poles(v, omega);
        let wsp = m.surface_plasmon().re;
        let mut points = vec![omega.re.abs() / v, (omega.re - wsp).abs() / v, (omega.re + wsp).abs() / v];
        // decay scales of the kernel, 2qz = 1, 4, 10, 25
        points.extend([0.5 / z, 2.0 / z, 5.0 / z, 12.5 / z]);
        let mut analytic = Complex64::new(0.0, 0.0);
        let mut subtract = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0); 4];
        let mut n = 0;
        for (res, p) in poles.into_iter().flatten() {
            let x = p.re;
            let kx = zz_kernel(x, z);
            let y = p.im.abs();
            points.extend([x, x - 3.0 * y, x + 3.0 * y, x - 20.0 * y, x + 20.0 * y]);
            // ∫₀^Q dq/(q − p); the path never crosses the cut
            analytic += res * kx * ((Complex64::new(qmax, 0.0) - p).ln() - (-p).ln());
            subtract[n] = (res, p, kx);
            n += 1;
        }
        let subtract = &subtract[..n];
        let integrand = |q: f64| {
            let s = Complex64::new(q * v, 0.0);
            let mut val = (m.reflection(omega + s) + m.reflection(omega - s) - 2.0 * r0) * zz_kernel(q, z);
            for &(res, p, kx) in subtract {
                val -= res * kx / (q - p);
            }
            val
        };
        let scale = if r0 != 0.0 { 1e-4 * tol * r0 / (16.0 * PI * z * z * z) } else { 0.0 };
        let spec = QuadSpec::with_rel_tol(tol).abs_tol(scale.max(1e-300)).breakpoints_within(0.0, qmax, points);
        match part {
            Part::Both => integrate_lenient(integrand, 0.0, qmax, &spec).value + analytic,
            Part::Re => Complex64::new(integrate_lenient(|q| integrand(q).re, 0.0, qmax, &spec).value + analytic.re, 0.0),
            Part::Im => Complex64::new(0.0, integrate_lenient(|q| integrand(q).im, 0.0, qmax, &spec).value + analytic.im),
        }
    }

    /// Scattered Σ at an arbitrary upper-half-plane frequency.
    pub(crate) fn sigma_scattered(&self, v: f64, omega: Complex64) -> Complex64 {
        let z = self.z_a;
        if v == 0.0 {
            return self.medium.reflection(omega) / (16.0 * PI * z * z * z);
        }
        self.doppler_sum(v, omega, 0.0, Part::Both, self.sigma_tol()) / (4.0 * PI)
    }

    /// Σ(ω, v) − Σ(iξ, 0), integrated as a difference so that its accuracy
    /// is relative to the (small) shift itself.
    pub(crate) fn sigma_shift(&self, v: f64, omega: Complex64, xi: f64) -> Complex64 {
        let z = self.z_a;
        let m = &self.medium;
        let r0 = m.reflection_imag_axis(xi);
        let w0 = Complex64::new(0.0, xi);
        let vacuum = Complex64::i() * (omega - w0) * (omega * omega + omega * w0 + w0 * w0) / (6.0 * PI);
        if v == 0.0 {
            return (m.reflection(omega) - r0) / (16.0 * PI * z * z * z) + vacuum;
        }
        self.doppler_sum(v, omega, r0, Part::Both, self.sigma_shift_tol()) / (4.0 * PI) + vacuum
    }

    /// α(ω, v) − α(iξ, 0) for ω near iξ, without cancellation.
    pub(crate) fn alpha_shift(&self, v: f64, omega: Complex64, xi: f64, alpha_static: f64) -> Complex64 {
        let a0 = self.particle.alpha0;
        let wa2 = self.particle.omega_a * self.particle.omega_a;
        let d_static = a0 * wa2 / alpha_static;
        let w0 = Complex64::new(0.0, xi);
        let d_shift = (omega - w0) * (omega + w0) + a0 * wa2 * self.sigma_shift(v, omega, xi);
        a0 * wa2 * d_shift / (d_static * (d_static - d_shift))
    }

    /// Σ(ω, v) including the vacuum term.
    pub(crate) fn sigma(&self, v: f64, omega: Complex64) -> Complex64 {
        self.sigma_scattered(v, omega) + Complex64::i() * omega * omega * omega / (6.0 * PI)
    }

    /// Re Σ on the real axis (even in ω).
    pub(crate) fn sigma_real_real_axis(&self, v: f64, omega: f64) -> f64 {
        let z = self.z_a;
        if v == 0.0 {
            return self.medium.reflection_re_real(omega) / (16.0 * PI * z * z * z);
        }
        self.doppler_sum(v, Complex64::new(omega, 0.0), 0.0, Part::Re, self.sigma_tol()).re / (4.0 * PI)
    }

    /// Im Σ on the real axis (odd in ω), integrated separately so that its
    /// relative accuracy does not depend on the size of Re Σ.
    pub(crate) fn sigma_imag_real_axis(&self, v: f64, omega: f64) -> f64 {
        let z = self.z_a;
        let vac = g_vacuum_im_zz(omega);
        if v == 0.0 {
            return self.medium.reflection_imag_real(omega) / (16.0 * PI * z * z * z) + vac;
        }
        self.doppler_sum(v, Complex64::new(omega, 0.0), 0.0, Part::Im, self.sigma_tol()).im / (4.0 * PI) + vac
    }

    #[inline]
    pub(crate) fn dressed_from_sigma(&self, omega: Complex64, sigma: Complex64) -> Complex64 {
        let a0 = self.particle.alpha0;
        let wa2 = self.particle.omega_a * self.particle.omega_a;
        a0 * wa2 / (wa2 - omega * omega - a0 * wa2 * sigma)
    }
}

impl<'a> Motion<'a> {
    pub fn certificate(&self) -> &PassivityCertificate {
        &self.certificate
    }

    /// Σ(ω, v).
    pub fn self_energy(&self, omega: Complex64) -> Result<Complex64> {
        check_upper(omega)?;
        if omega.im == 0.0 {
            let s = self.system;
            return Ok(Complex64::new(s.sigma_real_real_axis(self.v, omega.re), s.sigma_imag_real_axis(self.v, omega.re)));
        }
        Ok(self.system.sigma(self.v, omega))
    }

    pub fn alpha_dressed(&self, omega: Complex64) -> Result<PolarizabilityEval> {
        let sigma = self.self_energy(omega)?;
        Ok(PolarizabilityEval {
            omega,
            v: self.v,
            z_a: self.system.z_a,
            value: self.system.dressed_from_sigma(omega, sigma),
            self_energy: sigma,
        })
    }

    /// α_I(ω, v) = Im α(ω, v) = |α|² Im Σ, odd in ω.
    pub fn alpha_imag_real_axis(&self, omega: f64) -> Result<f64> {
        if !omega.is_finite() {
            return Err(Error::Domain(format!("frequency {omega} is not finite")));
        }
        Ok(self.alpha_imag_unchecked(omega))
    }

    pub(crate) fn alpha_imag_unchecked(&self, omega: f64) -> f64 {
        let (abs2, im_sigma) = self.alpha_abs2_and_im_sigma(omega);
        abs2 * im_sigma
    }

    /// (|α(ω)|², Im Σ(ω)) on the real axis.
    pub(crate) fn alpha_abs2_and_im_sigma(&self, omega: f64) -> (f64, f64) {
        let s = self.system;
        let re = s.sigma_real_real_axis(self.v, omega);
        let im = s.sigma_imag_real_axis(self.v, omega);
        let alpha = s.dressed_from_sigma(Complex64::new(omega, 0.0), Complex64::new(re, im));
        (alpha.norm_sqr(), im)
    }

    /// Resonance frequency ω_c: zero of Re of the dressed denominator.
    pub fn resonance(&self) -> Result<f64> {
        self.lorentzian_split(1).map(|s| s.center)
    }

    /// Lorentzian model of the ±ω_c peak of α_I (`side` = +1 or −1).
    pub fn lorentzian_split(&self, side: i32) -> Result<LorentzianSplit> {
        let s = self.split.get_or_init(|| self.fit_peak()).clone()?;
        Ok(if side < 0 { s.mirrored() } else { s })
    }

    /// α_I(ω) minus the windowed peaks at ±ω_c.
    pub fn lorentzian_residual(&self, omega: f64) -> Result<f64> {
        let s = self.lorentzian_split(1)?;
        Ok(self.alpha_imag_unchecked(omega) - s.peak(omega) - s.mirrored().peak(omega))
    }

    fn fit_peak(&self) -> Result<LorentzianSplit> {
        let sys = self.system;
        let a0 = sys.particle.alpha0;
        let wa = sys.particle.omega_a;
        let wa2 = wa * wa;
        let re_denominator = |u: f64| wa2 - u * u - a0 * wa2 * sys.sigma_real_real_axis(self.v, u);
        // Secant iteration on the real part of the denominator.
        let mut u0 = wa;
        let mut f0 = re_denominator(u0);
        let mut u1 = (wa2 - a0 * wa2 * sys.sigma_real_real_axis(self.v, wa)).max(0.25 * wa2).sqrt();
        let mut f1 = re_denominator(u1);
        for _ in 0..60 {
            if f1 == f0 {
                break;
            }
            let u2 = u1 - f1 * (u1 - u0) / (f1 - f0);
            u0 = u1;
            f0 = f1;
            u1 = u2;
            f1 = re_denominator(u1);
            if (u1 - u0).abs() < 1e-15 * wa {
                break;
            }
        }
        let wc = u1;
        let du = 1e-4 * wa;
        let slope = -(re_denominator(wc + du) - re_denominator(wc - du)) / (2.0 * du);
        let damping = a0 * wa2 * sys.sigma_imag_real_axis(self.v, wc);
        if !(slope > 0.0 && damping > 0.0) {
            return Err(Error::Fit { half_max: f64::NAN, curvature: f64::NAN });
        }
        let h = damping / slope;
        if h >= 1e-3 * wa {
            return Err(Error::Domain(format!("resonance half width {h:e} too broad for the narrow-peak split")));
        }
        let weight = PI * a0 * wa2 / slope;
        // Half-maximum scan on each side.
        let peak = self.alpha_imag_unchecked(wc);
        let half = 0.5 * peak;
        let scan = |dir: f64| {
            let (mut lo, mut hi) = (0.0, h);
            while self.alpha_imag_unchecked(wc + dir * hi) > half && hi < 1e3 * h {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if self.alpha_imag_unchecked(wc + dir * mid) > half {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let half_width_scan = 0.5 * (scan(1.0) + scan(-1.0));
        let d = 0.05 * h;
        let curv = (self.alpha_imag_unchecked(wc + d) - 2.0 * peak + self.alpha_imag_unchecked(wc - d)) / (d * d);
        let half_width_curvature = if curv < 0.0 { (-2.0 * peak / curv).sqrt() } else { f64::INFINITY };
        if !((half_width_scan / half_width_curvature - 1.0).abs() <= 0.5) {
            return Err(Error::Fit { half_max: half_width_scan, curvature: half_width_curvature });
        }
        let window = (1e4 * h).min(0.02 * wa);
        Ok(LorentzianSplit { center: wc, half_width: h, weight, window, half_width_scan, half_width_curvature })
    }
}

fn check_upper(omega: Complex64) -> Result<()> {
    if !(omega.im >= 0.0) || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::Domain(format!("frequency {omega} outside the closed upper half-plane")));
    }
    Ok(())
}
