//! Planar near-field scattered Green tensor, zz element.
//!
//! With the dipole along the surface normal every trace over polarization
//! picks out Π_zz = 1; the xz/zx elements are odd in the in-plane wavevector
//! and integrate to zero, so only the zz element exists here. Off-axis dipoles
//! would need the remaining elements.
//!
//! After integrating over the wavevector component perpendicular to the motion,
//!
//! ```text
//! G_zz(q, z_a, ω) = r(ω)/2 · q²/(2π) · [K₀ + K₂](2|q| z_a)
//! ```
//!
//! All ω-dependence sits in the reflection coefficient; the Bessel kernels
//! depend on (q, z_a) only, so continuation to complex ω is exact.

use crate::error::{Error, Result};
use crate::media::{DrudeModel, Permittivity};
use crate::quadrature::bessel::{k0123, scaled_k0123};
use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_BRANCH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGreenSample {
    pub q: f64,
    pub z_a: f64,
    pub omega: Complex64,
    pub value: Complex64,
    pub dvalue_dz: Complex64,
}

/// q²[K₀ + K₂](x)·(4z²)⁻¹·4z² written via x = 2|q|z: returns x²[K₀+K₂](x)
/// and x³[3K₁+K₃](x).
#[inline]
fn bessel_products(x: f64) -> (f64, f64) {
    if x < SERIES_BRANCH {
        if x == 0.0 {
            return (2.0, 8.0);
        }
        let x2 = x * x;
        (2.0 + x2 * (-0.5 - (0.5 * x).ln() - EULER_GAMMA), 8.0 + 2.0 * x2)
    } else {
        let [k0, k1, k2, k3] = k0123(x);
        let x2 = x * x;
        (x2 * (k0 + k2), x2 * x * (3.0 * k1 + k3))
    }
}

/// Spectral kernel k(q) = q²[K₀+K₂](2|q|z)/(2π), so that G_zz = (r/2)·k.
#[inline]
pub fn zz_kernel(q: f64, z_a: f64) -> f64 {
    let x = 2.0 * q.abs() * z_a;
    bessel_products(x).0 / (4.0 * z_a * z_a * 2.0 * PI)
}

/// ∂k/∂z_a = −|q|q²[3K₁+K₃](2|q|z)/(2π).
#[inline]
pub fn zz_kernel_dz(q: f64, z_a: f64) -> f64 {
    let x = 2.0 * q.abs() * z_a;
    -bessel_products(x).1 / (8.0 * z_a * z_a * z_a * 2.0 * PI)
}

/// `(k, ∂k/∂z)` sharing one Bessel evaluation.
#[inline]
pub fn zz_kernel_pair(q: f64, z_a: f64) -> (f64, f64) {
    let x = 2.0 * q.abs() * z_a;
    let (a, b) = bessel_products(x);
    (a / (8.0 * PI * z_a * z_a), -b / (16.0 * PI * z_a * z_a * z_a))
}

/// e^{2|q|z} k(q), finite for arbitrarily large q.
#[inline]
pub(crate) fn zz_kernel_scaled(q: f64, z_a: f64) -> f64 {
    let x = 2.0 * q.abs() * z_a;
    if x < 1.0 {
        return zz_kernel(q, z_a) * x.exp();
    }
    let [k0, _, k2, _] = scaled_k0123(x);
    x * x * (k0 + k2) / (8.0 * PI * z_a * z_a)
}

/// e^{2|q|z} ∂k/∂z.
#[inline]
pub(crate) fn zz_kernel_dz_scaled(q: f64, z_a: f64) -> f64 {
    let x = 2.0 * q.abs() * z_a;
    if x < 1.0 {
        return zz_kernel_dz(q, z_a) * x.exp();
    }
    let [_, k1, _, k3] = scaled_k0123(x);
    -x * x * x * (3.0 * k1 + k3) / (16.0 * PI * z_a * z_a * z_a)
}

fn check_height(z_a: f64) -> Result<()> {
    if !(z_a > 0.0 && z_a.is_finite()) {
        return Err(Error::Domain(format!("height must be positive, got {z_a}")));
    }
    Ok(())
}

/// G_s,zz(q, z_a, ω).
pub fn g_spectral_zz(m: &DrudeModel, q: f64, z_a: f64, omega: Complex64) -> Result<Complex64> {
    check_height(z_a)?;
    Ok(0.5 * m.reflection_p(omega)? * zz_kernel(q, z_a))
}

/// ∂G_s,zz/∂z_a.
pub fn g_spectral_zz_grad(m: &DrudeModel, q: f64, z_a: f64, omega: Complex64) -> Result<Complex64> {
    check_height(z_a)?;
    Ok(0.5 * m.reflection_p(omega)? * zz_kernel_dz(q, z_a))
}

pub fn g_spectral_sample(m: &DrudeModel, q: f64, z_a: f64, omega: Complex64) -> Result<SpectralGreenSample> {
    check_height(z_a)?;
    let r = m.reflection_p(omega)?;
    let (k, kz) = zz_kernel_pair(q, z_a);
    Ok(SpectralGreenSample { q, z_a, omega, value: 0.5 * r * k, dvalue_dz: 0.5 * r * kz })
}

/// Two-point element G_zz(q, z, z′, ω); depends on z + z′ only.
pub fn g_two_point_zz(m: &DrudeModel, q: f64, z: f64, z_prime: f64, omega: Complex64) -> Result<Complex64> {
    check_height(z)?;
    check_height(z_prime)?;
    Ok(0.5 * m.reflection_p(omega)? * zz_kernel(q, 0.5 * (z + z_prime)))
}

/// ∫dq/2π G_s,zz = r(ω)/(16π z_a³).
pub fn g_local_zz(m: &DrudeModel, z_a: f64, omega: Complex64) -> Result<Complex64> {
    check_height(z_a)?;
    Ok(m.reflection_p(omega)? / (16.0 * PI * z_a.powi(3)))
}

/// ∂/∂z_a of [`g_local_zz`], −3r(ω)/(16π z_a⁴).
pub fn g_local_zz_grad(m: &DrudeModel, z_a: f64, omega: Complex64) -> Result<Complex64> {
    check_height(z_a)?;
    Ok(-3.0 * m.reflection_p(omega)? / (16.0 * PI * z_a.powi(4)))
}

/// Im G₀,zz(ω) = ω³/(6π), continued as an odd function of ω.
#[inline]
pub fn g_vacuum_im_zz(omega: f64) -> f64 {
    omega * omega * omega / (6.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadSpec, Tail};
    use approx::assert_relative_eq;

    fn gold() -> DrudeModel {
        DrudeModel::new(8.39, 0.0839).unwrap()
    }

    const Z: f64 = 0.021_808_811_449_437_1;

    #[test]
    fn limit_at_zero_wavevector() {
        let m = gold();
        let w = Complex64::new(0.3, 0.7);
        let r = m.reflection(w);
        let g0 = g_spectral_zz(&m, 0.0, Z, w).unwrap();
        assert!((g0 - r / (8.0 * PI * Z * Z)).norm() < 1e-14 * g0.norm());
        let gz0 = g_spectral_zz_grad(&m, 0.0, Z, w).unwrap();
        assert!((gz0 + r / (4.0 * PI * Z.powi(3))).norm() < 1e-14 * gz0.norm());
        // the series branch joins the Bessel branch without a jump; the
        // kernel itself varies by ~1e-17 relative across this step
        let (lo, hi) = ((1.0 - 1e-9) * SERIES_BRANCH / (2.0 * Z), (1.0 + 1e-9) * SERIES_BRANCH / (2.0 * Z));
        assert_relative_eq!(zz_kernel(lo, Z), zz_kernel(hi, Z), max_relative = 1e-13);
        assert_relative_eq!(zz_kernel_dz(lo, Z), zz_kernel_dz(hi, Z), max_relative = 1e-13);
    }

    #[test]
    fn value_at_unit_bessel_argument() {
        let m = gold();
        let q = 0.5 / Z;
        let w = Complex64::new(0.0, m.omega_p);
        let g = g_spectral_zz(&m, q, Z, w).unwrap() / m.reflection(w);
        let want = 0.5 * q * q / (2.0 * PI) * (0.421_024_438_240_708_33 + 1.624_838_898_635_177_5);
        assert_relative_eq!(g.re, want, max_relative = 1e-14);
        assert!(g.im.abs() < 1e-14 * want);
    }

    #[test]
    fn truncation_point() {
        let far = zz_kernel(30.0 / (2.0 * Z), Z);
        let near = zz_kernel(1.0 / Z, Z);
        // x²[K₀+K₂](x) at x = 30 against x = 2
        assert_relative_eq!(far / near, 2.698_547_708_289_345_8e-11, max_relative = 1e-12);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let m = gold();
        let w = Complex64::new(0.0, 1.45);
        let q = 0.7 / Z;
        let h = 1e-6 * Z;
        let fd = (g_spectral_zz(&m, q, Z + h, w).unwrap() - g_spectral_zz(&m, q, Z - h, w).unwrap()) / (2.0 * h);
        let g = g_spectral_zz_grad(&m, q, Z, w).unwrap();
        assert!((fd - g).norm() < 1e-7 * g.norm());
    }

    #[test]
    fn scaled_kernels() {
        for q in [1.0, 20.0, 100.0, 600.0] {
            let x = 2.0 * q * Z;
            assert_relative_eq!(zz_kernel_scaled(q, Z), zz_kernel(q, Z) * x.exp(), max_relative = 1e-12);
            assert_relative_eq!(zz_kernel_dz_scaled(q, Z), zz_kernel_dz(q, Z) * x.exp(), max_relative = 1e-12);
        }
        assert!(zz_kernel_scaled(1e6, Z).is_finite() && zz_kernel_scaled(1e6, Z) > 0.0);
    }

    #[test]
    fn local_form_from_wavevector_integral() {
        let m = gold();
        let w = Complex64::new(0.0, 1.45);
        let spec = QuadSpec::with_rel_tol(1e-12).tail(Tail::Exponential { scale: 1.0 / (2.0 * Z) });
        let half = integrate(|q: f64| zz_kernel(q, Z), 0.0, f64::INFINITY, &spec).unwrap().value;
        // ∫dq/2π over the full line = (1/π)∫₀^∞
        let total = 0.5 * m.reflection(w) * half / PI;
        let local = g_local_zz(&m, Z, w).unwrap();
        assert!((total - local).norm() < 1e-10 * local.norm());
        let half_dz = integrate(|q: f64| zz_kernel_dz(q, Z), 0.0, f64::INFINITY, &spec).unwrap().value;
        let grad = 0.5 * m.reflection(w) * half_dz / PI;
        let local_grad = g_local_zz_grad(&m, Z, w).unwrap();
        assert!((grad - local_grad).norm() < 1e-10 * local_grad.norm());
    }

    #[test]
    fn vacuum_part() {
        assert_eq!(g_vacuum_im_zz(0.0), 0.0);
        assert_relative_eq!(g_vacuum_im_zz(1.45), 1.45f64.powi(3) / (6.0 * PI));
        assert_eq!(g_vacuum_im_zz(-0.3), -g_vacuum_im_zz(0.3));
    }

    #[test]
    fn two_point_symmetry() {
        let m = gold();
        let w = Complex64::new(1.45, 0.0);
        let a = g_two_point_zz(&m, 3.0, Z, 1.3 * Z, w).unwrap();
        let b = g_two_point_zz(&m, 3.0, 1.3 * Z, Z, w).unwrap();
        assert_eq!(a, b);
        assert_eq!(g_two_point_zz(&m, 3.0, Z, Z, w).unwrap(), g_spectral_zz(&m, 3.0, Z, w).unwrap());
    }
}
