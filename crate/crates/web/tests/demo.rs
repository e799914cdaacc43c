use neqcp_web::{absorption_near_resonance, force_ratios, tv_profile};

#[test]
fn profile_shape() {
    let p = tv_profile(1e-3, 11).unwrap();
    assert_eq!(p.len(), 22);
    assert!((p[0] - 1e-3).abs() < 1e-18 && (p[20] - 1e2).abs() < 1e-12);
    // nearly flat at small velocity
    for t in p.iter().skip(1).step_by(2) {
        assert!((t - 1.0).abs() < 0.06, "{t}");
    }
    assert!(tv_profile(0.0, 11).is_err());
    assert!(tv_profile(1e-3, 1).is_err());
}

#[test]
fn absorption_peaks_at_resonance() {
    let a = absorption_near_resonance(0.0, 1e-3, 101).unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = a.chunks(2).map(|c| (c[0], c[1])).unzip();
    let imax = ys.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    // the static image shift pulls the line to ω_a·sqrt(1 − g), g ≈ 1.86e-4
    assert!((xs[imax] - (1.0 - 1.8648e-4f64).sqrt()).abs() < 1.5e-5, "{}", xs[imax]);
    assert!(ys.iter().all(|y| *y > 0.0));
    assert!(absorption_near_resonance(0.0, 1.5, 10).is_err());
}

#[test]
fn force_ratios_at_rest_and_in_motion() {
    let r = force_ratios(0.0).unwrap();
    assert_eq!(r[0], 0.0);
    assert!((r[1] - 1.0).abs() < 1e-9 && r[2] == 0.0);
    let r = force_ratios(0.4).unwrap();
    // the thermal-like part carries a sizeable share once T̃_v ~ T_a
    assert!(r[2] > 0.3 && (r[3] - r[1] - r[2]).abs() < 1e-12);
    assert!(force_ratios(-1.0).is_err());
}
