//! Scaled complex error function `w(z) = exp(-z^2) erfc(-iz)`.
//!
//! Half-line integrals of gaussians against exponentials reduce to `w`,
//! so the accuracy of the gaussian pairing path rests entirely on this
//! module.  Three regions, after mapping to the first quadrant:
//!
//! * `|z| >= 6.5`: Laplace continued fraction with coefficients `k/2`.
//! * `Im z >= 1`: trapezoid rule on `(i/pi) integral e^{-t^2}/(z-t) dt`,
//!   whose aliasing error `~exp(-2 pi Im z / h)` is below 1e-18 at
//!   `h = 0.15`.
//! * otherwise: power series through `erfi`, which keeps the
//!   exponentially small real part `exp(-x^2)` on the real axis exact.
//!
//! The split matters: the continued fraction is a rational function, so
//! on the real axis it loses `Re w = exp(-x^2)` entirely.  That term is
//! below one ulp of `|w|` only once `x >= 6.5`, which fixes the radius.

use num_complex::Complex64;

use crate::sum::ComplexKahanSum;

const SQRT_PI: f64 = 1.7724538509055160272981674833411;

/// `w(z)` for arbitrary complex `z`.
///
/// In the lower half-plane the reflection `w(z) = 2 exp(-z^2) - w(-z)`
/// is applied first; `exp(-z^2)` grows like `exp(Im(z)^2)` there, so
/// callers that need `Im z << 0` should combine exponents themselves and
/// call with `Im z >= 0` arguments only.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return 2.0 * (-z * z).exp() - faddeeva(-z);
    }
    if z.re < 0.0 {
        return faddeeva(Complex64::new(-z.re, z.im)).conj();
    }
    debug_assert!(z.re >= 0.0 && z.im >= 0.0);
    if z.norm_sqr() >= 6.5 * 6.5 {
        continued_fraction(z)
    } else if z.im >= 1.0 {
        pole_trapezoid(z)
    } else {
        erfi_series(z)
    }
}

/// Laplace continued fraction, truncated at depth 32.
fn continued_fraction(z: Complex64) -> Complex64 {
    let mut t = z;
    for k in (1..=32).rev() {
        t = z - (k as f64 / 2.0) / t;
    }
    Complex64::new(0.0, 1.0 / SQRT_PI) / t
}

/// Trapezoid rule on the Hilbert-transform representation; valid for
/// `Im z >= 1` where the integrand is analytic in a wide strip.
fn pole_trapezoid(z: Complex64) -> Complex64 {
    // e^{-t^2} is below 1e-320 past |t| = 27.2, so the window is exact
    let h = 0.15;
    let n = (27.2 / h) as i64;
    let mut acc = ComplexKahanSum::new();
    for j in -n..=n {
        let t = j as f64 * h;
        acc.add((-t * t).exp() / (z - t));
    }
    acc.value() * Complex64::new(0.0, h / std::f64::consts::PI)
}

/// `w(z) = exp(-z^2) (1 + i erfi(z))` with the Maclaurin series for
/// `erfi`.  Within `|z| < 6.6` the largest term stays a bounded factor
/// above the sum, so no cancellation digits are lost.
fn erfi_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = z; // z^{2n+1} / n!
    let mut acc = ComplexKahanSum::new();
    acc.add(power);
    let mut peak: f64 = power.norm();
    for n in 1..400 {
        power *= z2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        acc.add(term);
        peak = peak.max(acc.value().norm());
        if n as f64 > z.norm_sqr() && term.norm() < 1e-22 * peak {
            break;
        }
    }
    let erfi = acc.value() * (2.0 / SQRT_PI);
    (-z2).exp() * (Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * erfi)
}
