//! F^As, the part driven by the position-antisymmetric imaginary part of the
//! two-point Green tensor. It vanishes whenever the geometry is mirror
//! symmetric about a plane containing the trajectory.

use crate::error::{Error, Result};
use crate::green::g_two_point_zz;
use crate::system::System;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    PlanarHalfSpace,
    /// Anything else, described by name and its declared symmetry.
    Declared { name: String, mirror_symmetric: bool },
}

/// Result of the planar kernel check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub value: f64,
    pub justification: &'static str,
    /// |∂_z 𝒢_Im,zz| / |∂_z G_Im,zz| at the (q z_a, ω) = (1, ω_a) sample.
    pub kernel_residual: f64,
}

const JUSTIFICATION: &str = "mirror-symmetric geometry: G_zz(q, z, z') depends on z + z' only, so the position-antisymmetric kernel vanishes";

impl System {
    pub fn f_as(&self, geometry: &Geometry) -> Result<SymmetryCheck> {
        match geometry {
            Geometry::PlanarHalfSpace => {}
            Geometry::Declared { mirror_symmetric: true, .. } => {
                return Ok(SymmetryCheck { value: 0.0, justification: JUSTIFICATION, kernel_residual: 0.0 });
            }
            Geometry::Declared { name, .. } => {
                return Err(Error::UnsupportedGeometry(format!("{name}: no mirror symmetry declared")));
            }
        }
        let kernel_residual = self.antisymmetric_kernel_residual()?;
        if kernel_residual > 1e-12 {
            return Err(Error::UnsupportedGeometry(format!("planar kernel check failed ({kernel_residual:e})")));
        }
        Ok(SymmetryCheck { value: 0.0, justification: JUSTIFICATION, kernel_residual })
    }

    /// Builds G_Im(R, R′) = [G(R,R′) − G(R′,R)*]/2i and
    /// 𝒢_Im = [G_Im(R,R′) − G_Im(R′,R)*]/2i from the two-point element and
    /// compares their source-point gradients.
    fn antisymmetric_kernel_residual(&self) -> Result<f64> {
        let z = self.z_a;
        let q = 1.0 / z;
        let w = Complex64::new(self.particle.omega_a, 0.0);
        let g = |a: f64, b: f64| g_two_point_zz(&self.medium, q, a, b, w);
        let two_i = Complex64::new(0.0, 2.0);
        let g_im = |a: f64, b: f64| -> Result<Complex64> { Ok((g(a, b)? - g(b, a)?.conj()) / two_i) };
        let cal = |a: f64, b: f64| -> Result<Complex64> { Ok((g_im(a, b)? - g_im(b, a)?.conj()) / two_i) };
        let h = 1e-4 * z;
        let grad_cal = (cal(z + h, z)? - cal(z - h, z)?) / (2.0 * h);
        let grad_im = (g_im(z + h, z)? - g_im(z - h, z)?) / (2.0 * h);
        Ok(grad_cal.norm() / grad_im.norm())
    }
}
