//! Quadrature kernels shared by the transform and pairing code.
//!
//! Two engines cover everything the crate integrates.  Smooth integrands on
//! a finite panel go through adaptive bisection with an embedded 10/21 point
//! Gauss-Legendre pair; the node tables are generated once at startup by
//! Newton iteration on the Legendre recurrence, so no hard-coded node
//! constants appear anywhere.  Compactly supported bump integrands, whose
//! derivatives all vanish at the support endpoints, use trapezoid doubling
//! instead: for that class the trapezoid rule converges faster than any
//! power of the step, and doubling gives a cheap two-agreement stop rule.

use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::sum::ComplexKahanSum;

/// Quadrature failed to reach the requested tolerance within its budget.
#[derive(Debug, Error)]
#[error("quadrature stalled: tolerance {tolerance:.3e} not reached after {evaluations} evaluations (best error {best:.3e})")]
pub struct QuadratureStall {
    pub tolerance: f64,
    pub evaluations: usize,
    pub best: f64,
}

/// Gauss-Legendre rule: nodes on (-1, 1) and matching weights.
struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre P_n(x) and derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    // P_n' via the standard relation on (-1, 1).
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess, then Newton to machine precision.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    GaussRule { nodes, weights }
}

fn rule_10() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_rule(10))
}

fn rule_21() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_rule(21))
}

fn apply_rule<F: FnMut(f64) -> Complex64>(rule: &GaussRule, f: &mut F, a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = ComplexKahanSum::new();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add(f(mid + half * x) * *w);
    }
    acc.value() * half
}

/// Adaptive Gauss-Legendre integration of `f` over `[a, b]`.
///
/// Splits panels until the embedded 10/21 point error estimate drops below
/// `tol` times the running scale of the integral.  Returns the value and an
/// accumulated error estimate.
pub fn adaptive<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<(Complex64, f64), QuadratureStall> {
    adaptive_scaled(f, a, b, tol, 0.0, max_panels)
}

/// As [`adaptive`], with an externally supplied floor on the scale the
/// tolerance is measured against.
///
/// An oscillatory integral can be orders of magnitude below its
/// integrand; anchoring the scale at, say, `max |f| * (b - a)` turns
/// `tol` into an honest absolute target instead of an unreachable
/// relative one.
pub fn adaptive_scaled<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    scale_floor: f64,
    max_panels: usize,
) -> Result<(Complex64, f64), QuadratureStall> {
    let whole = apply_rule(rule_21(), &mut f, a, b);
    let scale = whole.norm().max(scale_floor).max(1e-300);
    let mut stack = vec![(a, b, whole)];
    let mut acc = ComplexKahanSum::new();
    let mut err_acc = 0.0f64;
    let mut panels = 0usize;
    let mut evals = 31usize;
    while let Some((lo, hi, coarse)) = stack.pop() {
        panels += 1;
        if panels > max_panels {
            return Err(QuadratureStall {
                tolerance: tol,
                evaluations: evals,
                best: err_acc.max((coarse - whole).norm()),
            });
        }
        let mid = 0.5 * (lo + hi);
        let left = apply_rule(rule_21(), &mut f, lo, mid);
        let right = apply_rule(rule_21(), &mut f, mid, hi);
        let cheap = apply_rule(rule_10(), &mut f, lo, hi);
        evals += 62;
        let refined = left + right;
        let est = (refined - coarse).norm().max((coarse - cheap).norm() / 8.0);
        // local acceptance, prorated by panel length so errors stay additive
        let local_tol = tol * scale * ((hi - lo) / (b - a)).max(1e-6);
        if est <= local_tol || hi - lo < 1e-14 * (b - a).abs() {
            acc.add(refined);
            err_acc += est;
        } else {
            stack.push((lo, mid, left));
            stack.push((mid, hi, right));
        }
    }
    Ok((acc.value(), err_acc))
}

/// Trapezoid rule with doubling for integrands whose derivatives vanish at
/// both endpoints.  Stops after two consecutive doublings agree within
/// `tol` times the integral scale, or within the absolute floor
/// `abs_floor` (the transform of a bump at high frequency is exponentially
/// small, so a purely relative target would never be met).
pub fn trapezoid_doubling<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    abs_floor: f64,
    max_doublings: u32,
) -> Result<(Complex64, f64), QuadratureStall> {
    let len = b - a;
    let mut n = 16usize;
    let mut evals = 0usize;
    // endpoint values are zero for the target class but kept for generality
    let mut sum = ComplexKahanSum::new();
    sum.add(0.5 * f(a));
    sum.add(0.5 * f(b));
    for i in 1..n {
        sum.add(f(a + len * i as f64 / n as f64));
    }
    evals += n + 1;
    let mut prev = sum.value() * (len / n as f64);
    let mut agreements = 0u32;
    let mut best = f64::INFINITY;
    for _ in 0..max_doublings {
        // refine by inserting midpoints only
        for i in 0..n {
            sum.add(f(a + len * (i as f64 + 0.5) / n as f64));
        }
        evals += n;
        n *= 2;
        let cur = sum.value() * (len / n as f64);
        let diff = (cur - prev).norm();
        best = best.min(diff);
        if diff <= (tol * cur.norm()).max(abs_floor) {
            agreements += 1;
            if agreements >= 2 {
                return Ok((cur, diff));
            }
        } else {
            agreements = 0;
        }
        prev = cur;
    }
    Err(QuadratureStall {
        tolerance: tol,
        evaluations: evals,
        best,
    })
}

/// Plain composite Simpson rule on `n` panels (`n` even), used as the dense
/// second-opinion oracle in tests and for double-resolution cross checks.
pub fn simpson_dense<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, n: usize) -> Complex64 {
    assert!(n >= 2 && n % 2 == 0, "simpson panel count must be even");
    let h = (b - a) / n as f64;
    let mut acc = ComplexKahanSum::new();
    acc.add(f(a));
    acc.add(f(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(f(a + h * i as f64) * w);
    }
    acc.value() * (h / 3.0)
}
