use neqcp::forces::{BreakdownOptions, ForceEstimate, Geometry};
use neqcp::quadrature::{integrate, QuadSpec};
use neqcp::{Error, System};
use std::f64::consts::PI;

const WA: f64 = 1.45;

fn loose() -> System {
    let s = System::reference();
    let mut st = s.settings;
    st.rel_tol = 1e-6;
    s.with_settings(st)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn equilibrium_force_bare_route_matches_direct_product() {
    let s = System::reference();
    let z = s.z_a;
    let f = |xi: f64| s.particle.alpha_bare_imag_axis(xi) * (-3.0 * s.medium.reflection_imag_axis(xi) / (16.0 * PI * z.powi(4))) / (2.0 * PI);
    let spec = QuadSpec::with_rel_tol(1e-12).breakpoints_within(0.0, f64::INFINITY, [WA, 5.93, 8.39, 100.0]);
    let direct = integrate(f, 0.0, f64::INFINITY, &spec).unwrap().value;
    let bare = s.f_equilibrium_bare().unwrap();
    assert!(rel(bare.value, direct) < 1e-8, "{} vs {direct}", bare.value);
    let f0 = s.f_equilibrium().unwrap();
    assert!(f0.value < 0.0 && !f0.flagged());
    // dressing is an O(g) effect
    assert!(rel(f0.value, bare.value) < 10.0 * s.coupling());
}

#[test]
fn equilibrium_force_height_scaling() {
    let s = System::reference();
    let far = s.with_height(2.0 * s.z_a);
    let bare = far.f_equilibrium_bare().unwrap().value / s.f_equilibrium_bare().unwrap().value;
    assert!((16.0 * bare - 1.0).abs() < 1e-10, "{bare}");
    // dressing enhances the nearer force more, pulling the ratio below z⁻⁴
    let ratio = far.f_equilibrium().unwrap().value / s.f_equilibrium().unwrap().value;
    let deficit = 1.0 - 16.0 * ratio;
    assert!(deficit > 0.0 && deficit < 10.0 * s.coupling(), "{ratio}");
    assert!((16.0 * ratio - 0.9999056).abs() < 1e-6, "{}", 16.0 * ratio);
}

#[test]
fn equilibrium_force_is_linear_in_alpha0_at_leading_order() {
    let s = System::reference();
    let a0 = s.particle.alpha0;
    let per = |k: f64| s.with_alpha0(k * a0).f_equilibrium().unwrap().value / (k * a0);
    let (a, b) = (per(1e-4), per(1e-5));
    assert!(rel(a, b) < 1e-6);
    assert!(rel(per(1.0), b) < 10.0 * s.coupling());
}

#[test]
fn ds_reduces_to_equilibrium_at_rest() {
    let s = System::reference();
    let m = s.moving(0.0).unwrap();
    let f0 = s.f_equilibrium().unwrap().value;
    assert!(rel(m.f_ds().unwrap().value, f0) < 1e-10);
    assert_eq!(m.f_ds_lowv().unwrap().value, f0);
    assert_eq!(m.f_th().unwrap(), ForceEstimate::ZERO);
    assert_eq!(m.f_th_lowv().value, 0.0);
    assert!((m.f_lte().unwrap().value - f0).abs() <= 1e-10 * f0.abs());
}

#[test]
fn ds_low_velocity_correction_height_scaling() {
    let s = System::reference();
    let v = 1e-3;
    let delta = |sys: &System| {
        let f = sys.moving(v).unwrap().f_ds_lowv().unwrap().value;
        f - sys.f_equilibrium().unwrap().value
    };
    let ratio = delta(&s.with_height(2.0 * s.z_a)) / delta(&s);
    assert!((ratio * 64.0 - 1.0).abs() < 0.03, "{}", ratio * 64.0);
    // closed form of the q²-moment
    assert!(rel(s.second_moment_dz(), -15.0 / (32.0 * PI * s.z_a.powi(6))) < 1e-10);
}

#[test]
fn ds_low_velocity_exponent_and_coefficient() {
    let s = System::reference();
    let f0 = s.f_equilibrium().unwrap().value;
    let (b1, b2) = (1e-4, 1e-3);
    let d1 = s.moving(b1).unwrap().f_ds().unwrap().value - f0;
    let d2 = s.moving(b2).unwrap().f_ds().unwrap().value - f0;
    let exponent = (d2 / d1).ln() / (b2 / b1).ln();
    assert!((exponent - 2.0).abs() < 0.05, "{exponent}");
    let lowv = s.moving(b1).unwrap().f_ds_lowv().unwrap().value - f0;
    assert!(rel(d1, lowv) < 0.05, "{d1} vs {lowv}");
    assert!(rel(d2, s.moving(b2).unwrap().f_ds_lowv().unwrap().value - f0) < 1e-3);
}

/// Once qv reaches ω_a inside the kernel range the resonant Doppler window
/// takes over and the O(v²) correction reverses sign.
#[test]
fn ds_low_velocity_expansion_breaks_down_at_resonant_onset() {
    let s = System::reference();
    let f0 = s.f_equilibrium().unwrap().value;
    let m = s.moving(1e-2).unwrap();
    let exact = m.f_ds().unwrap().value - f0;
    let lowv = m.f_ds_lowv().unwrap().value - f0;
    assert!(lowv < 0.0 && exact > 0.0, "{exact} {lowv}");
    assert!((exact / f0.abs() - 0.0445).abs() < 1e-3, "{}", exact / f0.abs());
}

#[test]
fn low_velocity_thermal_closed_form() {
    let s = System::reference();
    let v = s.velocity_for_ttilde_ratio(1e-3);
    let low = s.moving(v).unwrap().f_th_lowv();
    assert!(rel(low.value / low.anomalous, 1.6) < 1e-14);
    assert!(low.value < 0.0 && !low.extrapolated);
    let far = s.with_height(2.0 * s.z_a).moving(v).unwrap().f_th_lowv();
    assert!(rel(far.value * 512.0, low.value) < 1e-14);
    let fast = s.moving(2.0 * v).unwrap().f_th_lowv();
    assert!(rel(fast.value, 4.0 * low.value) < 1e-14);
    assert!(s.moving(s.velocity_for_ttilde_ratio(0.1)).unwrap().f_th_lowv().extrapolated);
}

#[test]
fn thermal_routes_at_low_velocity() {
    let s = loose();
    let m = s.moving(s.velocity_for_ttilde_ratio(1e-3)).unwrap();
    let full = m.f_th().unwrap();
    let low = m.f_th_lowv();
    assert!(rel(full.value, low.value) < 0.05, "{} vs {}", full.value, low.value);
    let lte = m.f_th_lte().unwrap();
    assert!(rel(full.value / lte.value, 1.6) < 0.1, "{}", full.value / lte.value);
}

#[test]
fn emission_vanishes_at_low_velocity() {
    let s = System::reference();
    let terms: Vec<_> = [1.0, 0.5, 0.1, 0.03, 0.01]
        .iter()
        .map(|&r| s.moving(s.velocity_for_ttilde_ratio(r)).unwrap().f_th_highv().unwrap())
        .collect();
    let share: Vec<f64> = terms.iter().map(|h| h.emission / h.absorption).collect();
    assert!(share.windows(2).all(|p| p[1] < p[0]), "{share:?}");
    let (fast, slow) = (terms[0], terms[4]);
    assert!(slow.extrapolated && !fast.extrapolated);
    assert!(slow.occupation < 1e-40 && share[4] < 1e-3);
    assert!(slow.absorption < 0.0 && (slow.absorption / slow.absorption_lte - 1.0).abs() < 1e-12);
    assert!(fast.emission.abs() > 0.1 * fast.absorption.abs());
    assert!(rel(fast.absorption, (fast.occupation + 1.0) * fast.absorption_lte) < 1e-15);
}

#[test]
fn high_velocity_collapse_to_classical_form() {
    let s = System::reference();
    let h = s.moving(s.velocity_for_ttilde_ratio(5.0)).unwrap().f_th_highv().unwrap();
    assert!(rel(h.value, h.classical) < 0.1, "{} vs {}", h.value, h.classical);
}

#[test]
fn thermal_routes_at_high_velocity() {
    let s = loose();
    let m = s.moving(s.velocity_for_ttilde_ratio(1.0)).unwrap();
    let full = m.f_th().unwrap();
    let high = m.f_th_highv().unwrap();
    assert!(rel(full.value, high.value) < 0.1, "{} vs {}", full.value, high.value);
    let at_two = s.moving(s.velocity_for_ttilde_ratio(2.0)).unwrap().f_th().unwrap();
    assert!(at_two.value.abs() / full.value.abs() < 2.0);
}

#[test]
fn lte_underestimates_the_total() {
    let s = loose();
    let b = s.force_breakdown(s.velocity_for_ttilde_ratio(1.0), &BreakdownOptions::default()).unwrap();
    let lte = b.f_lte.unwrap();
    assert!(lte.value.abs() < b.f_total.value.abs());
    assert!(b.f_total.value < 0.0);
    let ratio = b.f_total.value / b.f0.value;
    assert!((ratio - 2.0).abs() < 0.5, "{ratio}");
    assert!(b.f_th.value.abs() > (b.f_ds.value - b.f0.value).abs());
    assert!(!b.flagged(), "{:?}", b.diagnostics.flags);
}

#[test]
fn antisymmetric_part() {
    let s = System::reference();
    let planar = s.f_as(&Geometry::PlanarHalfSpace).unwrap();
    assert_eq!(planar.value, 0.0);
    assert!(planar.kernel_residual <= 1e-12);
    assert!(!planar.justification.is_empty());
    let sym = Geometry::Declared { name: "slab".into(), mirror_symmetric: true };
    assert_eq!(s.f_as(&sym).unwrap().value, 0.0);
    let grating = Geometry::Declared { name: "blazed grating".into(), mirror_symmetric: false };
    assert!(matches!(s.f_as(&grating), Err(Error::UnsupportedGeometry(_))));
}

#[test]
fn static_thermal_analogue() {
    let s = System::reference();
    let zero = s.f_static_thermal(0.0).unwrap();
    assert_eq!(zero.correction, ForceEstimate::ZERO);
    assert!(rel(zero.f_tilde.value, s.f_equilibrium_bare().unwrap().value) < 1e-8);
    // low-T correction ∝ T²
    let c = |t: f64| s.f_static_thermal(t * WA).unwrap().correction.value;
    let exponent = (c(1e-2) / c(1e-3)).log10();
    assert!((exponent - 2.0).abs() < 0.05, "{exponent}");
    let low = s.f_static_thermal(1e-3 * WA).unwrap();
    assert!(rel(low.f_tilde_low_t - low.f_tilde_zero.value, low.correction.value) < 1e-3);
    assert!(s.f_static_thermal(-1.0).is_err());
}

#[test]
fn breakdown_at_rest_is_equilibrium() {
    let s = System::reference();
    let b = s.force_breakdown(0.0, &BreakdownOptions { bare_ds: true, lte: true, asymptotes: true }).unwrap();
    assert_eq!(b.f_ds, b.f0);
    assert_eq!(b.f_th, ForceEstimate::ZERO);
    assert_eq!(b.f_as, 0.0);
    assert_eq!(b.f_total.value, b.f0.value);
    assert_eq!(b.f_lte.unwrap().value, b.f0.value);
    assert_eq!(b.f_ds_bare.unwrap(), s.f_equilibrium_bare().unwrap());
    assert!(b.f_th_highv.is_none() && b.f_th_lowv.is_none());
    assert_eq!(b.diagnostics.tv_at_resonance_over_ta, 0.0);
}

#[test]
fn breakdown_is_even_in_velocity() {
    let s = loose();
    let v = s.velocity_for_ttilde_ratio(0.3);
    let opts = BreakdownOptions::default();
    let a = s.force_breakdown(v, &opts).unwrap();
    let b = s.force_breakdown(-v, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.diagnostics.reality_residual < 1e-6);
}

#[test]
fn unfolded_wavevector_line_agrees_with_folded_route() {
    let s = loose();
    let v = 0.01;
    let folded = s.moving(v).unwrap().f_ds().unwrap().value;
    let f0 = s.f_equilibrium().unwrap().value;
    for signed in [v, -v] {
        let unfolded = s.f_ds_unfolded(signed).unwrap().value;
        assert!(((unfolded - folded) / (folded - f0)).abs() < 1e-4, "{signed}: {unfolded} vs {folded}");
    }
}

#[test]
fn flagging_rule() {
    assert!(!ForceEstimate::ZERO.flagged());
    assert!(!ForceEstimate::new(1.0, 0.1).flagged());
    assert!(ForceEstimate::new(1.0, 0.11).flagged());
    assert!(ForceEstimate::new(1.0, f64::NAN).flagged());
    let sum = ForceEstimate::new(1.0, 0.01) + ForceEstimate::new(-3.0, 0.02);
    assert_eq!((sum.value, sum.error), (-2.0, 0.03));
}
