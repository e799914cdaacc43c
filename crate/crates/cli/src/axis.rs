//! Sweep axes.
//!
//! ```text
//! ttilde:1e-3:3:25     25 log-spaced points of T̃_v/T_a
//! beta:1e-3:0.1:10     10 log-spaced points of v/c
//! beta=0,0.01,0.05     explicit values (strictly increasing)
//! ```

use crate::config::SystemConfig;
use crate::CliError;
use neqcp::system::MAX_BETA;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Beta,
    TtildeOverTa,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn log_range(kind: AxisKind, start: f64, stop: f64, points: usize) -> Result<Axis, CliError> {
        if points < 2 {
            return Err(CliError::Validation(format!("log range needs at least 2 points, got {points}")));
        }
        if !(start > 0.0 && start.is_finite() && stop.is_finite()) {
            return Err(CliError::Validation(format!("log range bounds must be positive and finite, got ({start}, {stop})")));
        }
        if !(stop > start) {
            return Err(CliError::Validation(format!("log range must be strictly increasing, got ({start}, {stop})")));
        }
        let ratio = stop / start;
        let mut values: Vec<f64> = (0..points).map(|i| start * ratio.powf(i as f64 / (points - 1) as f64)).collect();
        values[points - 1] = stop;
        Ok(Axis { kind, values })
    }

    pub fn values(kind: AxisKind, values: Vec<f64>) -> Result<Axis, CliError> {
        if values.is_empty() {
            return Err(CliError::Validation("axis needs at least one value".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(CliError::Validation(format!("axis values must be finite and non-negative: {values:?}")));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Validation(format!("axis values must be strictly increasing: {values:?}")));
        }
        Ok(Axis { kind, values })
    }

    pub fn parse(spec: &str) -> Result<Axis, CliError> {
        let bad = |why: &str| CliError::Validation(format!("axis spec {spec:?}: {why}"));
        let kind_of = |name: &str| match name {
            "beta" => Ok(AxisKind::Beta),
            "ttilde" | "Ttilde_over_Ta" => Ok(AxisKind::TtildeOverTa),
            _ => Err(bad("axis name must be `beta` or `ttilde`")),
        };
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
        if let Some((name, list)) = spec.split_once('=') {
            let values = list.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            return Axis::values(kind_of(name)?, values);
        }
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [name, a, b, n] => {
                let n = n.trim().parse::<usize>().map_err(|_| bad("point count must be an integer"))?;
                Axis::log_range(kind_of(name)?, num(a)?, num(b)?, n)
            }
            _ => Err(bad("expected name:start:stop:points or name=v1,v2,...")),
        }
    }

    /// β value of every point.
    pub fn betas(&self, cfg: &SystemConfig) -> Vec<f64> {
        match self.kind {
            AxisKind::Beta => self.values.clone(),
            AxisKind::TtildeOverTa => self.values.iter().map(|&r| cfg.beta_for_ratio(r)).collect(),
        }
    }

    pub fn check_velocity_cap(&self, cfg: &SystemConfig) -> Result<(), CliError> {
        let top = self.betas(cfg).into_iter().fold(0.0, f64::max);
        if top >= MAX_BETA {
            return Err(CliError::Validation(format!("sweep reaches beta = {top}, beyond the nonrelativistic cap {MAX_BETA}")));
        }
        Ok(())
    }
}
