//! Row-parallel sweeps. Every point is a pure function of the configuration
//! and its axis value, so tables are identical for any worker count.

use crate::axis::Axis;
use crate::config::SystemConfig;
use crate::table::{Table, Value};
use crate::CliError;
use neqcp::forces::{BreakdownOptions, ForceBreakdown};
use neqcp::System;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Breakdown,
    Lte,
    BareDs,
    ThermalAnalogue,
    TeffProfile,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        Some(match s {
            "breakdown" => Mode::Breakdown,
            "lte" => Mode::Lte,
            "bare_ds" => Mode::BareDs,
            "thermal_analogue" => Mode::ThermalAnalogue,
            "teff_profile" => Mode::TeffProfile,
            _ => return None,
        })
    }

    pub fn parse_list(s: &str) -> Result<Vec<Mode>, CliError> {
        let mut modes = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let m = Mode::parse(name).ok_or_else(|| {
                CliError::Validation(format!("unknown mode {name:?} (breakdown, lte, bare_ds, thermal_analogue, teff_profile)"))
            })?;
            if !modes.contains(&m) {
                modes.push(m);
            }
        }
        if modes.is_empty() {
            return Err(CliError::Validation("no modes given".into()));
        }
        modes.sort();
        Ok(modes)
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub config: SystemConfig,
    pub axis: Axis,
    pub modes: Vec<Mode>,
    /// None: rayon's default pool.
    pub workers: Option<usize>,
}

pub const SWEEP_COLUMNS: [&str; 29] = [
    "beta",
    "Ttilde_over_Ta",
    "Tv_at_omega_a_over_Ta",
    "F0",
    "F_ds_norm",
    "F_th_norm",
    "F_th_highv_norm",
    "F_th_lowv_norm",
    "F_lte_norm",
    "F_total_norm",
    "F_ds_bare_norm",
    "err_F0",
    "err_F_ds_norm",
    "err_F_th_norm",
    "err_F_th_highv_norm",
    "err_F_th_lowv_norm",
    "err_F_lte_norm",
    "err_F_total_norm",
    "err_F_ds_bare_norm",
    "F_th_highv_extrapolated",
    "F_th_lowv_extrapolated",
    "F_th_highv_emission_norm",
    "F_th_highv_absorption_norm",
    "F_th_lowv_thermal_norm",
    "F_th_lowv_anomalous_norm",
    "reality_residual",
    "flagged",
    "flags",
    "error",
];

pub const THERMAL_COLUMNS: [&str; 9] = [
    "T_over_Ta",
    "F_tilde_norm",
    "F_tilde_lowT_norm",
    "F_tilde_highT_norm",
    "correction_norm",
    "err_F_tilde_norm",
    "err_correction_norm",
    "F_tilde_zero",
    "error",
];

pub const TEFF_COLUMNS: [&str; 8] =
    ["beta", "Ttilde_over_Ta", "omega_over_omega_a", "Tv_over_Ttilde", "lambda_eff_over_za", "log_ratio", "degenerate", "error"];

/// Frequencies of the T_v profile: 26 log-spaced points over [10⁻³, 10²] ω_a.
pub fn teff_frequencies() -> Vec<f64> {
    (0..26).map(|i| 1e-3 * 1e5f64.powf(i as f64 / 25.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub main: Table,
    pub thermal: Option<Table>,
    pub teff: Option<Table>,
    /// Rows whose quadratures were flagged.
    pub flagged_rows: usize,
    /// Rows that failed outright.
    pub failed_rows: usize,
}

struct Point {
    row: Vec<Value>,
    flagged: bool,
    failed: bool,
    thermal: Option<Vec<Value>>,
    teff: Vec<Vec<Value>>,
}

pub fn run_sweep(req: &SweepRequest) -> Result<SweepOutput, CliError> {
    req.axis.check_velocity_cap(&req.config)?;
    let sys = req.config.system();
    let betas = req.axis.betas(&req.config);
    // normalization first: a failure here fails the whole sweep
    sys.f_equilibrium().map_err(|e| CliError::Runtime(format!("equilibrium force: {e}")))?;
    let eval = || betas.par_iter().map(|&b| point(&sys, &req.config, b, &req.modes)).collect::<Vec<_>>();
    let points = match req.workers {
        None => eval(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?
            .install(eval),
    };

    let mut main = Table::new(SWEEP_COLUMNS.to_vec());
    let mut thermal = req.modes.contains(&Mode::ThermalAnalogue).then(|| Table::new(THERMAL_COLUMNS.to_vec()));
    let mut teff = req.modes.contains(&Mode::TeffProfile).then(|| Table::new(TEFF_COLUMNS.to_vec()));
    let (mut flagged_rows, mut failed_rows) = (0, 0);
    for p in points {
        flagged_rows += p.flagged as usize;
        failed_rows += p.failed as usize;
        main.push(p.row);
        if let (Some(t), Some(r)) = (thermal.as_mut(), p.thermal) {
            t.push(r);
        }
        if let Some(t) = teff.as_mut() {
            for r in p.teff {
                t.push(r);
            }
        }
    }
    Ok(SweepOutput { main, thermal, teff, flagged_rows, failed_rows })
}

fn point(sys: &System, cfg: &SystemConfig, beta: f64, modes: &[Mode]) -> Point {
    let ratio = cfg.ratio_for_beta(beta);
    let wants_forces = modes.iter().any(|m| matches!(m, Mode::Breakdown | Mode::Lte | Mode::BareDs));
    let opts = BreakdownOptions {
        bare_ds: modes.contains(&Mode::BareDs),
        lte: modes.contains(&Mode::Lte),
        asymptotes: modes.contains(&Mode::Breakdown),
    };
    let (row, flagged, failed) = if wants_forces {
        match sys.force_breakdown(beta, &opts) {
            Ok(b) => {
                let flagged = b.flagged();
                (force_row(beta, &b, modes.contains(&Mode::Breakdown)), flagged, false)
            }
            Err(e) => (error_row(sys, beta, ratio, e.to_string()), false, true),
        }
    } else {
        match tv_at_resonance(sys, beta) {
            Ok(tv) => (base_row(sys, beta, ratio, tv.into()), false, false),
            Err(e) => (error_row(sys, beta, ratio, e.to_string()), false, true),
        }
    };
    let thermal = modes.contains(&Mode::ThermalAnalogue).then(|| thermal_row(sys, ratio));
    let teff = if modes.contains(&Mode::TeffProfile) { teff_rows(sys, beta, ratio) } else { Vec::new() };
    let thermal_failed = thermal.as_ref().is_some_and(|r| matches!(r.last(), Some(Value::Text(s)) if !s.is_empty()));
    let teff_failed = teff.iter().any(|r| matches!(r.last(), Some(Value::Text(s)) if !s.is_empty()));
    Point { row, flagged, failed: failed || thermal_failed || teff_failed, thermal, teff }
}

fn tv_at_resonance(sys: &System, beta: f64) -> neqcp::Result<f64> {
    if beta == 0.0 {
        return Ok(0.0);
    }
    let wa = sys.particle.omega_a;
    Ok(sys.moving(beta)?.effective_temperature(wa)?.t_v / wa)
}

fn f0_value(sys: &System) -> Option<(f64, f64)> {
    sys.f_equilibrium().ok().map(|f| (f.value, f.error))
}

/// Row with only the axis, T_v and F0 filled in.
fn base_row(sys: &System, beta: f64, ratio: f64, tv: Value) -> Vec<Value> {
    let mut row: Vec<Value> = vec![Value::Num(None); SWEEP_COLUMNS.len()];
    row[0] = beta.into();
    row[1] = ratio.into();
    row[2] = tv;
    if let Some((v, e)) = f0_value(sys) {
        row[3] = v.into();
        row[11] = e.into();
    }
    row[26] = false.into();
    row[27] = String::new().into();
    row[28] = String::new().into();
    row
}

fn error_row(sys: &System, beta: f64, ratio: f64, message: String) -> Vec<Value> {
    let mut row = base_row(sys, beta, ratio, Value::Num(None));
    row[26] = true.into();
    row[28] = message.into();
    row
}

fn force_row(beta: f64, b: &ForceBreakdown, asymptotes: bool) -> Vec<Value> {
    let f0 = b.f0.value;
    let n = |x: f64| x / f0;
    let e = |x: f64| x / f0.abs();
    let highv = b.f_th_highv.filter(|_| asymptotes);
    let lowv = b.f_th_lowv.filter(|_| asymptotes);
    // v = 0: the asymptotes vanish identically
    let at_rest = b.v == 0.0 && asymptotes;
    let highv_value = highv.map(|h| n(h.value)).or(at_rest.then_some(0.0));
    let lowv_value = lowv.map(|l| n(l.value)).or(at_rest.then_some(0.0));
    let closed = |x: Option<f64>| x.map(|_| 0.0);
    let flag_text = |x: Option<bool>| x.map_or(Value::Num(None), Value::Bool);
    vec![
        beta.into(),
        b.ttilde_over_ta.into(),
        b.diagnostics.tv_at_resonance_over_ta.into(),
        f0.into(),
        n(b.f_ds.value).into(),
        n(b.f_th.value).into(),
        highv_value.into(),
        lowv_value.into(),
        b.f_lte.map(|f| n(f.value)).into(),
        n(b.f_total.value).into(),
        b.f_ds_bare.map(|f| n(f.value)).into(),
        b.f0.error.into(),
        e(b.f_ds.error).into(),
        e(b.f_th.error).into(),
        // window integrals of the resonant asymptote carry no estimate
        Value::Num(None),
        closed(lowv_value).into(),
        b.f_lte.map(|f| e(f.error)).into(),
        e(b.f_total.error).into(),
        b.f_ds_bare.map(|f| e(f.error)).into(),
        flag_text(highv.map(|h| h.extrapolated)),
        flag_text(lowv.map(|l| l.extrapolated)),
        highv.map(|h| n(h.emission)).into(),
        highv.map(|h| n(h.absorption)).into(),
        lowv.map(|l| n(l.thermal)).into(),
        lowv.map(|l| n(l.anomalous)).into(),
        b.diagnostics.reality_residual.into(),
        b.flagged().into(),
        b.diagnostics.flags.join("; ").into(),
        String::new().into(),
    ]
}

/// Static thermal analogue at T = T̃_v, normalized by F̃(0).
fn thermal_row(sys: &System, ratio: f64) -> Vec<Value> {
    let t = ratio * sys.particle.omega_a;
    match sys.f_static_thermal(t) {
        Ok(a) => {
            let z = a.f_tilde_zero.value;
            vec![
                ratio.into(),
                (a.f_tilde.value / z).into(),
                (a.f_tilde_low_t / z).into(),
                (a.f_tilde_high_t / z).into(),
                (a.correction.value / z).into(),
                (a.f_tilde.error / z.abs()).into(),
                (a.correction.error / z.abs()).into(),
                z.into(),
                String::new().into(),
            ]
        }
        Err(e) => {
            let mut row = vec![Value::Num(None); THERMAL_COLUMNS.len()];
            row[0] = ratio.into();
            row[8] = e.to_string().into();
            row
        }
    }
}

fn teff_rows(sys: &System, beta: f64, ratio: f64) -> Vec<Vec<Value>> {
    if beta == 0.0 {
        return Vec::new();
    }
    let wa = sys.particle.omega_a;
    let tt = sys.ttilde(beta);
    let motion = sys.moving(beta);
    teff_frequencies()
        .into_iter()
        .map(|k| {
            let r = motion.as_ref().map_err(|e| e.clone()).and_then(|m| m.effective_temperature(k * wa));
            match r {
                Ok(t) => vec![
                    beta.into(),
                    ratio.into(),
                    k.into(),
                    (t.t_v / tt).into(),
                    (t.lambda_eff / sys.z_a).into(),
                    t.log_ratio.into(),
                    t.degenerate.into(),
                    String::new().into(),
                ],
                Err(e) => vec![
                    beta.into(),
                    ratio.into(),
                    k.into(),
                    Value::Num(None),
                    Value::Num(None),
                    Value::Num(None),
                    Value::Num(None),
                    e.to_string().into(),
                ],
            }
        })
        .collect()
}
