//! Modified Bessel functions of the second kind, orders 0–3.
//!
//! K₀ and K₁ come from the ascending series for `x ≤ 2` and from Chebyshev
//! expansions of the scaled functions in 1/x above (checked against Steed's
//! continued fraction in the tests); K₂ and K₃ follow by upward recurrence,
//! which is stable for K. The unscaled functions underflow silently to zero
//! once `e^{-x}` does (x ≳ 745); use the scaled variants `e^x K_n(x)` there.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;

/// `(K₀(x), K₁(x))` from the ascending series, `0 < x ≤ 2`.
fn series_k0_k1(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let l = (0.5 * x).ln();
    // term_k = y^k / (k!)², harmonic H_k
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut s0 = 0.0;
    // term1_k = y^k / (k! (k+1)!)
    let mut term1 = 1.0;
    let mut i1 = 1.0;
    let mut s1 = -2.0 * EULER_GAMMA + 1.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        s0 += harmonic * term;
        term1 *= y / (kf * (kf + 1.0));
        i1 += term1;
        // ψ(k+1) + ψ(k+2) = -2γ + 2H_k + 1/(k+1)
        s1 += (-2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0)) * term1;
        if term < 1e-18 * i0 && term1 < 1e-18 * i1 {
            break;
        }
    }
    let k0 = -(l + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + l * (0.5 * x * i1) - 0.25 * x * s1;
    (k0, k1)
}

// Chebyshev expansions of √x e^x K_ν(x) in s = 1/x, on s ∈ [0, 1/8] (FAR)
// and s ∈ [1/8, 1/2] (NEAR).
const CHEB_K0_FAR: [f64; 16] = [
    1.2439906508684620388,
    -9.1748526910256953107e-3,
    1.444550931775005821e-4,
    -4.0136141754357097287e-6,
    1.5678318108523106726e-7,
    -7.7701104385217377103e-9,
    4.6111825761797178825e-10,
    -3.1585929978605657705e-11,
    2.4350180393650411278e-12,
    -2.0743313873983478977e-13,
    1.9257872805899170847e-14,
    -1.9275548058389561036e-15,
    2.0621980291978182783e-16,
    -2.3416851175792424026e-17,
    2.8059028106430422468e-18,
    -3.5305076311618079459e-19,
];
const CHEB_K1_FAR: [f64; 16] = [
    1.2818965417186950052,
    2.8328878130497209358e-2,
    -2.4753706739052503454e-4,
    5.7719724516072488205e-6,
    -2.0689392195365483027e-7,
    9.7399834413818041803e-9,
    -5.5853361403806249847e-10,
    3.7329966340461852402e-11,
    -2.8250519610232254451e-12,
    2.3720190024841441736e-13,
    -2.1766773879917539793e-14,
    2.1579141616160324539e-15,
    -2.290196930718269276e-16,
    2.5828857298232749619e-17,
    -3.0767526412684631876e-18,
    3.851487721280491597e-19,
];
const CHEB_K0_NEAR: [f64; 19] = [
    1.2117802604833602929,
    -2.235652605699819052e-2,
    7.7341811546938582353e-4,
    -4.2810066888860994645e-5,
    3.0817001738629747437e-6,
    -2.6393672220096649741e-7,
    2.5637130364034692063e-8,
    -2.7427055499002012639e-9,
    3.1694296580974995921e-10,
    -3.9023532869621841416e-11,
    5.0680406981885754021e-12,
    -6.8895747410078706795e-13,
    9.7449784978259176914e-14,
    -1.4273328418845485054e-14,
    2.1564125710214630396e-15,
    -3.3496542551495627722e-16,
    5.3352602169529116922e-17,
    -8.6936699808907538077e-18,
    1.4464043478622122279e-18,
];
const CHEB_K1_NEAR: [f64; 19] = [
    1.3872156703486941485,
    7.5719899531993678171e-2,
    -1.441051556475406123e-3,
    6.6501169551257479394e-5,
    -4.3699847095201407661e-6,
    3.5402774997630526799e-7,
    -3.3111637792932920209e-8,
    3.4459775819010534532e-9,
    -3.8989323474754271049e-10,
    4.7208197504658356401e-11,
    -6.0478356628753562345e-12,
    8.1284948748658747888e-13,
    -1.1386945747147891429e-13,
    1.6540358408462282326e-14,
    -2.4809025677068848222e-15,
    3.8292378907024096948e-16,
    -6.0647341040012418188e-17,
    9.8324256232648616039e-18,
    -1.6284168738284380036e-18,
];

#[inline]
fn clenshaw(c: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

/// `(e^x K₀(x), e^x K₁(x))`, `x ≥ 2`.
#[inline]
fn asymptotic_scaled_k0_k1(x: f64) -> (f64, f64) {
    let s = 1.0 / x;
    let r = s.sqrt();
    if s <= 0.125 {
        let t = 16.0 * s - 1.0;
        (r * clenshaw(&CHEB_K0_FAR, t), r * clenshaw(&CHEB_K1_FAR, t))
    } else {
        let t = (s - 0.3125) / 0.1875;
        (r * clenshaw(&CHEB_K0_NEAR, t), r * clenshaw(&CHEB_K1_NEAR, t))
    }
}

/// `(e^x K₀(x), e^x K₁(x))` by Steed's CF2, `x ≥ 2`. Reference for the
/// Chebyshev branch.
#[cfg(test)]
fn cf2_scaled_k0_k1(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `[e^x K₀, e^x K₁, e^x K₂, e^x K₃](x)` for `x > 0`, no argument checks.
#[inline]
pub(crate) fn scaled_k0123(x: f64) -> [f64; 4] {
    let (k0, k1) = if x <= SERIES_LIMIT {
        let (k0, k1) = series_k0_k1(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        asymptotic_scaled_k0_k1(x)
    };
    let k2 = k0 + 2.0 * k1 / x;
    let k3 = k1 + 4.0 * k2 / x;
    [k0, k1, k2, k3]
}

/// `[K₀, K₁, K₂, K₃](x)` for `x > 0`, no argument checks.
#[inline]
pub(crate) fn k0123(x: f64) -> [f64; 4] {
    if x <= SERIES_LIMIT {
        let (k0, k1) = series_k0_k1(x);
        let k2 = k0 + 2.0 * k1 / x;
        [k0, k1, k2, k1 + 4.0 * k2 / x]
    } else {
        let e = (-x).exp();
        scaled_k0123(x).map(|k| k * e)
    }
}

fn check(n: u32, x: f64) -> Result<()> {
    if n > 3 {
        return Err(Error::Domain(format!("Bessel order {n} not supported (0..=3)")));
    }
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain(format!("K_n needs a finite positive argument, got {x}")));
    }
    Ok(())
}

/// K_n(x) for n ∈ {0, 1, 2, 3}, x > 0.
pub fn bessel_k(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(k0123(x)[n as usize])
}

/// e^x K_n(x) for n ∈ {0, 1, 2, 3}, x > 0.
pub fn bessel_k_scaled(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(scaled_k0123(x)[n as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent arbitrary-precision evaluation.
    const REF: &[(f64, [f64; 4])] = &[
        (1e-8, [18.536_612_259_610_778, 99_999_999.999_999_905, 2.0e16, 7.999_999_999_999_999_9e24]),
        (0.1, [2.427_069_024_702_016_6, 9.853_844_780_870_606_1, 199.503_964_642_114_14, 7990.012_430_465_436_2]),
        (1.0, [0.421_024_438_240_708_33, 0.601_907_230_197_234_57, 1.624_838_898_635_177_5, 7.101_262_824_737_944_5]),
        (1.999, [0.114_033_830_589_232_92, 0.140_049_842_077_109_68, 0.254_153_732_617_356_67, 0.648_611_588_184_876_9]),
        (2.001, [0.113_754_098_736_684_61, 0.139_682_188_301_767_53, 0.253_366_480_847_396_79, 0.646_161_910_135_644_18]),
        (10.0, [1.778_006_231_616_765_2e-5, 1.864_877_345_382_558_5e-5, 2.150_981_700_693_276_9e-5, 2.725_270_025_659_869_2e-5]),
        (100.0, [4.656_628_229_175_902e-45, 4.679_853_735_636_909_3e-45, 4.750_225_303_888_640_2e-45, 4.869_862_747_792_454_9e-45]),
    ];

    #[test]
    fn matches_reference_table() {
        for (x, want) in REF {
            for n in 0..4u32 {
                let got = bessel_k(n, *x).unwrap();
                let w = want[n as usize];
                let tol = 2e-14;
                assert!((got / w - 1.0).abs() < tol, "K_{n}({x}) = {got}, want {w}");
            }
        }
    }

    #[test]
    fn chebyshev_branch_matches_continued_fraction() {
        let mut x = 2.0;
        while x < 2000.0 {
            let (a0, a1) = asymptotic_scaled_k0_k1(x);
            let (b0, b1) = cf2_scaled_k0_k1(x);
            assert!((a0 / b0 - 1.0).abs() < 4e-15, "K0 at {x}");
            assert!((a1 / b1 - 1.0).abs() < 4e-15, "K1 at {x}");
            x *= 1.0137;
        }
    }

    #[test]
    fn k0_at_one() {
        assert!((bessel_k(0, 1.0).unwrap() - 0.421_024_438_240_708_34).abs() < 1e-15);
    }

    #[test]
    fn scaled_large_argument() {
        let s = bessel_k_scaled(0, 700.0).unwrap();
        assert!((s / 0.047_362_369_454_613_572_1 - 1.0).abs() < 1e-14);
        assert_eq!(bessel_k(0, 1000.0).unwrap(), 0.0);
    }

    #[test]
    fn small_argument_products() {
        let x: f64 = 1e-6;
        assert!((x * x * bessel_k(2, x).unwrap() - 2.0).abs() < 1e-11);
        assert!((x * x * x * bessel_k(3, x).unwrap() - 8.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
        assert!(bessel_k(4, 1.0).is_err());
    }
}
