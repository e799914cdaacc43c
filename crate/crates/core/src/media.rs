//! Local dielectric response of the half-space and its p-polarized
//! near-field reflection coefficient.

use crate::error::{Error, Result};
use num_complex::Complex64;

const PLASMON_GUARD: f64 = 1e-12;

/// A spatially local, isotropic permittivity.
pub trait Permittivity {
    /// ε(ω) for Im ω ≥ 0.
    fn epsilon(&self, omega: Complex64) -> Result<Complex64>;

    /// r(ω) = (ε − 1)/(ε + 1).
    fn reflection_p(&self, omega: Complex64) -> Result<Complex64> {
        let eps = self.epsilon(omega)?;
        let gap = (eps + 1.0).norm();
        if gap < PLASMON_GUARD {
            return Err(Error::PoleProximity { re: omega.re, im: omega.im, gap });
        }
        Ok((eps - 1.0) / (eps + 1.0))
    }
}

/// ε(ω) = 1 − ω_p² / [ω(ω + iγ)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeModel {
    pub omega_p: f64,
    pub gamma: f64,
}

fn upper_half_plane(omega: Complex64) -> Result<()> {
    if !(omega.im >= 0.0) || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::Domain(format!("frequency {omega} outside the closed upper half-plane")));
    }
    Ok(())
}

impl DrudeModel {
    pub fn new(omega_p: f64, gamma: f64) -> Result<DrudeModel> {
        if !(omega_p > 0.0 && omega_p.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Validation(format!("Drude parameters must be positive (omega_p = {omega_p}, gamma = {gamma})")));
        }
        Ok(DrudeModel { omega_p, gamma })
    }

    /// r(ω) without argument checks, in the form ω_p² / (ω_p² − 2ω(ω + iγ)),
    /// which is regular at ω = 0 where r = 1.
    #[inline]
    pub fn reflection(&self, omega: Complex64) -> Complex64 {
        let wp2 = self.omega_p * self.omega_p;
        let d = Complex64::new(wp2, 0.0) - 2.0 * omega * Complex64::new(omega.re, omega.im + self.gamma);
        wp2 / d
    }

    /// r at a real frequency.
    #[inline]
    pub fn reflection_real(&self, omega: f64) -> Complex64 {
        let wp2 = self.omega_p * self.omega_p;
        let d = Complex64::new(wp2 - 2.0 * omega * omega, -2.0 * omega * self.gamma);
        wp2 / d
    }

    /// Im r at a real frequency (odd in ω).
    #[inline]
    pub fn reflection_imag_real(&self, omega: f64) -> f64 {
        let wp2 = self.omega_p * self.omega_p;
        let a = wp2 - 2.0 * omega * omega;
        let b = 2.0 * omega * self.gamma;
        wp2 * b / (a * a + b * b)
    }

    /// Re r at a real frequency (even in ω).
    #[inline]
    pub fn reflection_re_real(&self, omega: f64) -> f64 {
        let wp2 = self.omega_p * self.omega_p;
        let a = wp2 - 2.0 * omega * omega;
        let b = 2.0 * omega * self.gamma;
        wp2 * a / (a * a + b * b)
    }

    /// r(iξ), real and in (0, 1] for ξ ≥ 0.
    #[inline]
    pub fn reflection_imag_axis(&self, xi: f64) -> f64 {
        let wp2 = self.omega_p * self.omega_p;
        wp2 / (wp2 + 2.0 * xi * (xi + self.gamma))
    }

    /// d Im r / dω at ω = 0⁺, i.e. 2γ/ω_p².
    pub fn reflection_imag_slope_at_zero(&self) -> f64 {
        2.0 * self.gamma / (self.omega_p * self.omega_p)
    }

    /// Lower-half-plane pole of r in the right half-plane, the damped surface
    /// plasmon ω_sp − iγ/2.
    pub fn surface_plasmon(&self) -> Complex64 {
        let re = (0.5 * self.omega_p * self.omega_p - 0.25 * self.gamma * self.gamma).max(0.0).sqrt();
        Complex64::new(re, -0.5 * self.gamma)
    }
}

impl Permittivity for DrudeModel {
    fn epsilon(&self, omega: Complex64) -> Result<Complex64> {
        upper_half_plane(omega)?;
        if omega.norm() == 0.0 {
            return Err(Error::Domain("the Drude permittivity has a pole at omega = 0".into()));
        }
        let wp2 = self.omega_p * self.omega_p;
        Ok(1.0 - wp2 / (omega * Complex64::new(omega.re, omega.im + self.gamma)))
    }

    /// Unlike [`Permittivity::epsilon`], defined at ω = 0 (r(0) = 1).
    fn reflection_p(&self, omega: Complex64) -> Result<Complex64> {
        upper_half_plane(omega)?;
        let wp2 = self.omega_p * self.omega_p;
        let denom = Complex64::new(wp2, 0.0) - 2.0 * omega * Complex64::new(omega.re, omega.im + self.gamma);
        // |ε + 1| = |denom| / |ω(ω + iγ)|
        let scale = (omega * Complex64::new(omega.re, omega.im + self.gamma)).norm();
        if scale > 0.0 && denom.norm() < PLASMON_GUARD * scale {
            return Err(Error::PoleProximity { re: omega.re, im: omega.im, gap: denom.norm() / scale });
        }
        Ok(wp2 / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gold() -> DrudeModel {
        DrudeModel::new(8.39, 0.0839).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        let m = gold();
        let wp = m.omega_p;
        let lossless = DrudeModel { gamma: 0.0, ..m };
        let e = lossless.epsilon(Complex64::new(0.0, wp)).unwrap();
        assert_relative_eq!(e.re, 2.0, max_relative = 1e-15);
        let e = m.epsilon(Complex64::new(wp, 0.0)).unwrap();
        // 1 − 1/(1 + 0.01i)
        assert_relative_eq!(e.re, 1.0 - 1.0 / 1.0001, max_relative = 1e-10);
        assert_relative_eq!(e.im, 0.01 / 1.0001, max_relative = 1e-12);
        let e = m.epsilon(Complex64::new(0.0, 0.5 * wp)).unwrap();
        assert_relative_eq!(e.re, 1.0 + 1.0 / (0.5 * 0.51), max_relative = 1e-13);
        assert_eq!(e.im, 0.0);
        assert!(m.epsilon(Complex64::new(0.0, 0.0)).is_err());
        assert!(m.epsilon(Complex64::new(1.0, -1e-3)).is_err());
    }

    #[test]
    fn reflection_examples() {
        let m = gold();
        // regular form agrees with (ε−1)/(ε+1)
        for w in [Complex64::new(1.3, 0.2), Complex64::new(-4.0, 1e-3), Complex64::new(0.0, 7.0)] {
            let e = m.epsilon(w).unwrap();
            let r = (e - 1.0) / (e + 1.0);
            assert!((m.reflection_p(w).unwrap() - r).norm() < 1e-13 * r.norm());
            assert!((m.reflection(w) - r).norm() < 1e-13 * r.norm());
        }
        assert_eq!(m.reflection_p(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert!((m.reflection_imag_axis(1e-9) - 1.0).abs() < 1e-10);
        let h = 1e-6 * m.omega_p;
        let slope = (m.reflection_imag_real(h) - m.reflection_imag_real(-h)) / (2.0 * h);
        assert_relative_eq!(slope, m.reflection_imag_slope_at_zero(), max_relative = 1e-8);
        assert!(m.reflection_imag_axis(1e6) < 1e-9);
    }

    #[test]
    fn plasmon_guard() {
        let lossless = DrudeModel { gamma: 0.0, ..gold() };
        let wsp = lossless.omega_p / 2f64.sqrt();
        assert!(matches!(
            lossless.reflection_p(Complex64::new(wsp, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(gold().reflection_p(Complex64::new(wsp, 0.0)).is_ok());
    }
}
