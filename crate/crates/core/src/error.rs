use thiserror::Error;

/// Errors raised by the physics layers. Quadrature failures are converted into
/// [`Error::NonConvergence`] with the partial estimate attached.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("surface-plasmon pole guard tripped at omega = {re}{im:+}i (|eps + 1| = {gap:e})")]
    PoleProximity { re: f64, im: f64, gap: f64 },
    #[error("bare polarizability evaluated on its real-axis pole at omega = {0}")]
    Pole(f64),
    #[error("passivity violated at omega = {omega} (Im Sigma = {value:e})")]
    Stability { omega: f64, value: f64 },
    #[error("quadrature did not converge in {context}: value {value:e}, error estimate {error_estimate:e}")]
    NonConvergence { context: &'static str, value: f64, error_estimate: f64 },
    #[error("Lorentzian fit inconsistent: half-maximum width {half_max:e} vs curvature width {curvature:e}")]
    Fit { half_max: f64, curvature: f64 },
    #[error("Wick integrand not real: |Im|/|Re| = {0:e}")]
    RealityViolation(f64),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
