//! Randomised invariants of the media, Green-tensor, quadrature and Bessel layers.

use neqcp::green::{g_spectral_zz, g_spectral_zz_grad};
use neqcp::media::{DrudeModel, Permittivity};
use neqcp::quadrature::{bessel_k, integrate, QuadSpec, Tail};
use neqcp::stats::bose_occupation;
use neqcp::units::{natural_to_nm, nm_to_natural};
use num_complex::Complex64;
use proptest::prelude::*;

fn gold() -> DrudeModel {
    DrudeModel::new(8.39, 0.0839).unwrap()
}

const Z: f64 = 0.021_808_811_449_437_1;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn media_crossing_relation(re in -200.0f64..200.0, im in 1e-6f64..200.0) {
        let m = gold();
        let w = Complex64::new(re, im);
        let mirror = Complex64::new(-re, im);
        prop_assert!(crel(m.epsilon(mirror).unwrap(), m.epsilon(w).unwrap().conj()) < 1e-12);
        prop_assert!(crel(m.reflection_p(mirror).unwrap(), m.reflection_p(w).unwrap().conj()) < 1e-12);
    }

    #[test]
    fn media_passive_on_real_axis(w in log_uniform(1e-6, 8.39e3)) {
        let m = gold();
        prop_assert!(m.reflection_p(Complex64::new(w, 0.0)).unwrap().im > 0.0);
        prop_assert!(m.epsilon(Complex64::new(w, 0.0)).unwrap().im > 0.0);
    }

    #[test]
    fn media_imaginary_axis_real_and_bounded(xi in log_uniform(1e-4 * 8.39, 1e3 * 8.39)) {
        let m = gold();
        let eps = m.epsilon(Complex64::new(0.0, xi)).unwrap();
        prop_assert!(eps.im.abs() <= 1e-14 * eps.re.abs() && eps.re > 1.0);
        let r = m.reflection_imag_axis(xi);
        prop_assert!(r > 0.0 && r < 1.0);
    }

    #[test]
    fn green_even_in_q(qz in 0.0f64..20.0, re in -30.0f64..30.0, im in 0.0f64..30.0) {
        let m = gold();
        let q = qz / Z;
        let w = Complex64::new(re, im);
        prop_assume!(w.norm() > 1e-9);
        prop_assert_eq!(g_spectral_zz(&m, q, Z, w).unwrap(), g_spectral_zz(&m, -q, Z, w).unwrap());
        prop_assert_eq!(g_spectral_zz_grad(&m, q, Z, w).unwrap(), g_spectral_zz_grad(&m, -q, Z, w).unwrap());
    }

    #[test]
    fn green_real_on_imaginary_axis(qz in 0.0f64..20.0, xi in log_uniform(1e-3, 500.0)) {
        let g = g_spectral_zz(&gold(), qz / Z, Z, Complex64::new(0.0, xi)).unwrap();
        prop_assert!(g.im.abs() <= 1e-14 * g.re.abs());
        prop_assert!(g.re > 0.0);
        let d = g_spectral_zz_grad(&gold(), qz / Z, Z, Complex64::new(0.0, xi)).unwrap();
        prop_assert!(d.re < 0.0 || qz == 0.0);
    }

    #[test]
    fn green_decays_beyond_inverse_height(qz in 1.0f64..14.0, step in 1e-3f64..1.0, xi in log_uniform(0.1, 100.0)) {
        let m = gold();
        let w = Complex64::new(0.0, xi);
        let a = g_spectral_zz(&m, qz / Z, Z, w).unwrap().norm();
        let b = g_spectral_zz(&m, (qz + step) / Z, Z, w).unwrap().norm();
        prop_assert!(b < a);
    }

    #[test]
    fn bessel_recurrence(x in log_uniform(1e-6, 100.0)) {
        let k: Vec<f64> = (0..4).map(|n| bessel_k(n, x).unwrap()).collect();
        for n in 1..3 {
            let lhs = k[n + 1];
            let rhs = k[n - 1] + 2.0 * n as f64 / x * k[n];
            prop_assert!(rel(rhs, lhs) < 1e-12, "n {} x {} rel {:e}", n, x, rel(rhs, lhs));
        }
    }

    #[test]
    fn quadrature_linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.2f64..5.0) {
        let spec = QuadSpec::with_rel_tol(1e-10);
        let f = |x: f64| (-c * x).exp();
        let g = |x: f64| 1.0 / (1.0 + x * x);
        let i = |h: &dyn Fn(f64) -> f64| integrate(h, 0.0, f64::INFINITY, &spec).unwrap().value;
        let combined = i(&|x| a * f(x) + b * g(x));
        let separate = a * i(&f) + b * i(&g);
        let scale = a.abs() / c + b.abs() * std::f64::consts::FRAC_PI_2;
        prop_assert!((combined - separate).abs() <= 10.0 * 1e-10 * scale);
    }

    #[test]
    fn quadrature_breakpoint_insensitivity(p in 0.01f64..9.99, c in 0.3f64..4.0) {
        let f = |x: f64| x * x * (-c * x).exp() + (2.0 * x).cos();
        let plain = integrate(f, 0.0, 10.0, &QuadSpec::with_rel_tol(1e-10)).unwrap();
        let split = integrate(f, 0.0, 10.0, &QuadSpec::with_rel_tol(1e-10).breakpoints_within(0.0, 10.0, [p])).unwrap();
        prop_assert!((plain.value - split.value).abs() <= plain.error_estimate.max(split.error_estimate).max(1e-15));
    }

    #[test]
    fn length_round_trip(nm in log_uniform(1e-6, 1e6)) {
        let x = nm_to_natural(nm);
        let back = natural_to_nm(x);
        prop_assert!((back - nm).abs() <= f64::EPSILON * nm);
        prop_assert!((nm_to_natural(back) - x).abs() <= f64::EPSILON * x);
    }

    #[test]
    fn bose_reflection_identity(t in log_uniform(1e-3, 1e3), w in log_uniform(1e-3, 1e3)) {
        let n = bose_occupation(t, w).unwrap();
        let m = bose_occupation(t, -w).unwrap();
        prop_assert!((n + m + 1.0).abs() <= 1e-12 * (1.0 + n.abs()));
    }
}

#[test]
fn bessel_derivative_identity() {
    for x in [0.1, 1.0, 10.0] {
        let h = 1e-5 * x;
        let fd = (bessel_k(0, x + h).unwrap() - bessel_k(0, x - h).unwrap()) / (2.0 * h);
        assert!(rel(-fd, bessel_k(1, x).unwrap()) < 1e-6, "x = {x}");
    }
    assert!((bessel_k(3, 2.5).unwrap() - bessel_k(1, 2.5).unwrap() - 4.0 / 2.5 * bessel_k(2, 2.5).unwrap()).abs() / bessel_k(3, 2.5).unwrap() < 1e-12);
}

#[test]
fn mellin_normalization() {
    let spec = QuadSpec::with_rel_tol(1e-11).tail(Tail::Exponential { scale: 1.0 }).breakpoints_within(0.0, f64::INFINITY, [1.0, 5.0]);
    let r = integrate(|x: f64| x * x * (bessel_k(0, x).unwrap() + bessel_k(2, x).unwrap()), 0.0, f64::INFINITY, &spec).unwrap();
    assert!(rel(r.value, 2.0 * std::f64::consts::PI) < 1e-8, "{}", r.value);
}

#[test]
fn green_gradient_grid_matches_finite_difference() {
    let m = gold();
    let wa = 1.45;
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let qz = 0.1 * 50f64.powf(i as f64 / 4.0);
        for j in 0..5 {
            let xi = wa * 0.1 * 100f64.powf(j as f64 / 4.0);
            let w = Complex64::new(0.0, xi);
            let q = qz / Z;
            let h = 1e-6 * Z;
            let fd = (g_spectral_zz(&m, q, Z + h, w).unwrap() - g_spectral_zz(&m, q, Z - h, w).unwrap()) / (2.0 * h);
            worst = worst.max(crel(fd, g_spectral_zz_grad(&m, q, Z, w).unwrap()));
        }
    }
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn reflection_strictly_decreasing_on_imaginary_axis() {
    let m = gold();
    let mut prev = f64::INFINITY;
    for i in 0..=400 {
        let xi = 8.39 * 1e-4 * 1e7f64.powf(i as f64 / 400.0);
        let r = m.reflection_imag_axis(xi);
        assert!(r < prev, "xi = {xi}");
        prev = r;
    }
}
