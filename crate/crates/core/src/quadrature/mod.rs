//! Adaptive Gauss–Kronrod quadrature and the modified Bessel functions needed
//! by the planar Green tensor.
//!
//! [`integrate`] bisects the interval with the largest error estimate until the
//! global estimate meets the tolerance. Complex integrands share a single
//! subdivision tree, so the real and imaginary parts see identical nodes.
//! Multi-dimensional integrals are built by nesting calls; inner integrals
//! usually go through [`integrate_lenient`] so a marginal inner failure
//! degrades the outer error estimate instead of aborting.

pub mod bessel;
mod kronrod;

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Sub};

pub use bessel::{bessel_k, bessel_k_scaled};

/// Values an integrand may return.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + fmt::Debug
{
    fn zero() -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Variable transform used when the upper limit is `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// `x = a + t/(1-t)`; suited to algebraic decay.
    Algebraic,
    /// `x = a - scale·ln(1-t)`; suited to decay like `exp(-(x-a)/scale)`.
    Exponential { scale: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Strictly increasing interior points where the integrand is non-smooth
    /// or sharply peaked.
    pub breakpoints: Vec<f64>,
    pub tail: Tail,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-30,
            max_subdivisions: 2000,
            breakpoints: Vec::new(),
            tail: Tail::Algebraic,
        }
    }
}

impl QuadSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadSpec { rel_tol, ..Default::default() }
    }

    pub fn abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    /// Sets the breakpoints from an arbitrary collection: points outside
    /// `(a, b)` and near-duplicates are discarded, the rest sorted.
    pub fn breakpoints_within(mut self, a: f64, b: f64, points: impl IntoIterator<Item = f64>) -> Self {
        let mut pts: Vec<f64> = points.into_iter().filter(|p| p.is_finite() && *p > a && *p < b).collect();
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let span = if b.is_finite() { b - a } else { 1.0 + a.abs() };
        let min_gap = 1e-13 * span.max(a.abs()).max(if b.is_finite() { b.abs() } else { 0.0 });
        let mut out: Vec<f64> = Vec::with_capacity(pts.len());
        for p in pts {
            let far_from_a = p - a > min_gap;
            let far_from_b = !b.is_finite() || b - p > min_gap;
            let far_from_prev = out.last().is_none_or(|q| p - q > min_gap);
            if far_from_a && far_from_b && far_from_prev {
                out.push(p);
            }
        }
        self.breakpoints = out;
        self
    }

    fn check(&self, a: f64, b: f64) -> Result<(), String> {
        if !(self.rel_tol > 1e-14 && self.rel_tol < 1e-2) {
            return Err(format!("rel_tol {} outside (1e-14, 1e-2)", self.rel_tol));
        }
        if !(self.abs_tol >= 0.0) {
            return Err("abs_tol must be non-negative".into());
        }
        if self.max_subdivisions == 0 {
            return Err("max_subdivisions must be positive".into());
        }
        if let Tail::Exponential { scale } = self.tail {
            if !(scale > 0.0 && scale.is_finite()) {
                return Err("exponential tail scale must be positive".into());
            }
        }
        let mut prev = a;
        for &p in &self.breakpoints {
            if !(p > prev) {
                return Err(format!("breakpoint {p} not strictly increasing / interior"));
            }
            prev = p;
        }
        if !(prev < b) {
            return Err(format!("breakpoint {prev} not interior to ({a}, {b})"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError<T> {
    /// Budget exhausted (or roundoff limit reached) above tolerance.
    NonConvergence(QuadResult<T>),
    /// `a >= b`, or a limit that is NaN / `-∞`.
    Domain { a: f64, b: f64 },
    InvalidSpec(String),
}

impl<T> QuadError<T> {
    pub fn partial(&self) -> Option<&QuadResult<T>> {
        match self {
            QuadError::NonConvergence(r) => Some(r),
            _ => None,
        }
    }
}

impl<T: fmt::Debug> fmt::Display for QuadError<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NonConvergence(r) => write!(
                f,
                "no convergence after {} evaluations: value {:?}, error estimate {:e}",
                r.evaluations, r.value, r.error_estimate
            ),
            QuadError::Domain { a, b } => write!(f, "invalid integration domain [{a}, {b}]"),
            QuadError::InvalidSpec(s) => write!(f, "invalid quadrature spec: {s}"),
        }
    }
}

impl<T: fmt::Debug> std::error::Error for QuadError<T> {}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

fn adaptive<T: Scalar>(
    f: &mut impl FnMut(f64) -> T,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<QuadResult<T>, QuadError<T>> {
    let mut segs: Vec<Segment<T>> = Vec::with_capacity(points.len() + 16);
    for w in points.windows(2) {
        let (value, err) = kronrod::gk21(f, w[0], w[1]);
        segs.push(Segment { a: w[0], b: w[1], value, err });
    }
    let mut evaluations = 21 * segs.len();
    let sum = |segs: &[Segment<T>]| {
        let mut v = T::zero();
        let mut e = 0.0;
        for s in segs {
            v = v + s.value;
            e += s.err;
        }
        (v, e)
    };
    loop {
        let (value, err) = sum(&segs);
        let tol = (spec.rel_tol * value.modulus()).max(spec.abs_tol);
        if err <= tol && err.is_finite() {
            return Ok(QuadResult { value, error_estimate: err, evaluations });
        }
        let result = QuadResult { value, error_estimate: err, evaluations };
        if !err.is_finite() || segs.len() >= spec.max_subdivisions {
            return Err(QuadError::NonConvergence(result));
        }
        // Worst interval that can still be split.
        let mut worst: Option<usize> = None;
        for (i, s) in segs.iter().enumerate() {
            let mid = 0.5 * (s.a + s.b);
            if !(mid > s.a && mid < s.b) || (s.b - s.a) <= 8.0 * f64::EPSILON * s.a.abs().max(s.b.abs()) {
                continue;
            }
            if worst.is_none_or(|w| s.err > segs[w].err) {
                worst = Some(i);
            }
        }
        let Some(w) = worst else {
            return Err(QuadError::NonConvergence(result));
        };
        let (a, b) = (segs[w].a, segs[w].b);
        let mid = 0.5 * (a + b);
        let (v1, e1) = kronrod::gk21(f, a, mid);
        let (v2, e2) = kronrod::gk21(f, mid, b);
        evaluations += 42;
        segs[w] = Segment { a, b: mid, value: v1, err: e1 };
        segs.push(Segment { a: mid, b, value: v2, err: e2 });
    }
}

/// Integrates `f` over `[a, b]`, where `b` may be `+∞`.
///
/// Semi-infinite ranges are mapped onto `[0, 1)` by the transform selected in
/// `spec.tail`; breakpoints are mapped along.
pub fn integrate<T: Scalar, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult<T>, QuadError<T>> {
    if !(a.is_finite() && (b > a) && !b.is_nan()) {
        return Err(QuadError::Domain { a, b });
    }
    spec.check(a, b).map_err(QuadError::InvalidSpec)?;
    if b.is_finite() {
        let mut points = Vec::with_capacity(spec.breakpoints.len() + 2);
        points.push(a);
        points.extend_from_slice(&spec.breakpoints);
        points.push(b);
        return adaptive(&mut f, &points, spec);
    }
    let mut points = Vec::with_capacity(spec.breakpoints.len() + 2);
    points.push(0.0);
    match spec.tail {
        Tail::Algebraic => {
            points.extend(spec.breakpoints.iter().map(|&x| (x - a) / (1.0 + x - a)));
            points.push(1.0);
            let mut g = |t: f64| {
                let s = 1.0 - t;
                f(a + t / s) * (1.0 / (s * s))
            };
            adaptive(&mut g, &points, spec)
        }
        Tail::Exponential { scale } => {
            points.extend(spec.breakpoints.iter().map(|&x| -(-(x - a) / scale).exp_m1()));
            points.push(1.0);
            let mut g = |t: f64| {
                let s = 1.0 - t;
                f(a - scale * (-t).ln_1p()) * (scale / s)
            };
            adaptive(&mut g, &points, spec)
        }
    }
}

/// Like [`integrate`], but an empty interval (`a >= b`) yields zero and a
/// non-converged run yields its partial estimate. Intended for inner integrals
/// of nested quadratures.
pub fn integrate_lenient<T: Scalar, F: FnMut(f64) -> T>(f: F, a: f64, b: f64, spec: &QuadSpec) -> QuadResult<T> {
    if a >= b {
        return QuadResult { value: T::zero(), error_estimate: 0.0, evaluations: 0 };
    }
    match integrate(f, a, b, spec) {
        Ok(r) | Err(QuadError::NonConvergence(r)) => r,
        Err(e) => panic!("inner quadrature misconfigured: {e}"),
    }
}
