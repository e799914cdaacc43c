//! Three operations for the static demo page. Each returns a flat
//! `Float64Array`-friendly vector; the plain functions are what the native
//! tests call, the `#[wasm_bindgen]` wrappers only translate errors.

use neqcp::system::Settings;
use neqcp::System;
use wasm_bindgen::prelude::*;

/// Browser-friendly tolerance; the profile and α_I are far tighter anyway.
const DEMO_REL_TOL: f64 = 1e-5;

fn system() -> System {
    System::reference().with_settings(Settings { rel_tol: DEMO_REL_TOL, ..Settings::default() })
}

fn check_points(n: usize) -> Result<(), String> {
    if (2..=2000).contains(&n) {
        Ok(())
    } else {
        Err(format!("point count must lie in [2, 2000], got {n}"))
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// [ω/ω_a, T_v(ω)/T̃_v] pairs on a log grid over [10⁻³, 10²] ω_a.
pub fn tv_profile(beta: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(beta > 0.0) {
        return Err(format!("beta must be positive, got {beta}"));
    }
    let sys = system();
    let wa = sys.particle.omega_a;
    let motion = sys.moving(beta).map_err(|e| e.to_string())?;
    let tt = sys.ttilde(beta);
    let mut out = Vec::with_capacity(2 * points);
    for x in log_grid(1e-3, 1e2, points) {
        let t = motion.effective_temperature(x * wa).map_err(|e| e.to_string())?;
        out.push(x);
        out.push(t.t_v / tt);
    }
    Ok(out)
}

/// [ω/ω_a, α_I(ω, v)/α₀] on a linear grid of half-width `span`·ω_a around ω_a.
pub fn absorption_near_resonance(beta: f64, span: f64, points: usize) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(span > 0.0 && span < 1.0) {
        return Err(format!("span must lie in (0, 1), got {span}"));
    }
    let sys = system();
    let wa = sys.particle.omega_a;
    let a0 = sys.particle.alpha0;
    let motion = sys.moving(beta).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let x = 1.0 - span + 2.0 * span * i as f64 / (points - 1) as f64;
        out.push(x);
        out.push(motion.alpha_imag_real_axis(x * wa).map_err(|e| e.to_string())? / a0);
    }
    Ok(out)
}

/// [β, F^Ds/F0, F^Th/F0, F_total/F0] at the velocity with the given T̃_v/T_a.
pub fn force_ratios(ttilde_over_ta: f64) -> Result<Vec<f64>, String> {
    if !(ttilde_over_ta >= 0.0 && ttilde_over_ta <= 5.0) {
        return Err(format!("T̃_v/T_a must lie in [0, 5], got {ttilde_over_ta}"));
    }
    let sys = system();
    let beta = sys.velocity_for_ttilde_ratio(ttilde_over_ta);
    let f0 = sys.f_equilibrium().map_err(|e| e.to_string())?.value;
    let motion = sys.moving(beta).map_err(|e| e.to_string())?;
    let ds = motion.f_ds().map_err(|e| e.to_string())?.value;
    let th = motion.f_th().map_err(|e| e.to_string())?.value;
    Ok(vec![beta, ds / f0, th / f0, (ds + th) / f0])
}

#[wasm_bindgen(js_name = tvProfile)]
pub fn tv_profile_js(beta: f64, points: usize) -> Result<Vec<f64>, JsError> {
    tv_profile(beta, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = absorptionNearResonance)]
pub fn absorption_near_resonance_js(beta: f64, span: f64, points: usize) -> Result<Vec<f64>, JsError> {
    absorption_near_resonance(beta, span, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = forceRatios)]
pub fn force_ratios_js(ttilde_over_ta: f64) -> Result<Vec<f64>, JsError> {
    force_ratios(ttilde_over_ta).map_err(|e| JsError::new(&e))
}
