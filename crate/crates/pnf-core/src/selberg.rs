//! The Selberg trace formula as a summation-formula instance.
//!
//! For a compact hyperbolic surface of genus h the identity pairs the
//! Laplace eigenvalue ordinates against the primitive geodesic length
//! spectrum:
//!
//! `(1/2) sum_gamma phi_hat-pairs = -(h-1)/2 int cosh(t/2)/sinh^2(t/2) phi
//!  + sum_{tau, l >= 1} tau / (4 sinh(tau l / 2)) (phi(tau l) + phi(-tau l))`.
//!
//! The remainder kernel has a double pole at t = 0 (the zeta function
//! here is order 2), so test functions must stay away from the origin.
//! Real spectra are out of scope; data is user-supplied or synthesized.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::quad::{self, QuadratureStall};
use crate::report::{params_from, VerificationReport};
use crate::sum::KahanSum;
use crate::testfn::TestFunction;

#[derive(Debug, Error)]
pub enum SelbergError {
    #[error("invalid instance data: {0}")]
    Validation(String),
    #[error("test-function support reaches {support_end:.3} but the length spectrum is only complete up to {cutoff:.3}")]
    CoverageGap { support_end: f64, cutoff: f64 },
    #[error("eigenvalue-side tail estimate {tail_estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    TailTooLarge { tail_estimate: f64, tolerance: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureStall),
    #[error("cannot parse instance JSON: {0}")]
    Json(String),
}

/// A trace-formula instance: genus, eigenvalue ordinates
/// (`1/4 + gamma^2` are Laplacian eigenvalues; each entry stands for
/// the pair `±gamma`), and primitive geodesic lengths, complete up to
/// their maximum.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelbergData {
    pub genus: u32,
    pub eigen_gammas: Vec<f64>,
    pub lengths: Vec<f64>,
}

impl SelbergData {
    pub fn validate(&self) -> Result<(), SelbergError> {
        if self.genus < 2 {
            return Err(SelbergError::Validation(format!(
                "genus must be at least 2, got {}",
                self.genus
            )));
        }
        if self.eigen_gammas.iter().any(|&g| !(g >= 0.0)) {
            return Err(SelbergError::Validation(
                "eigenvalue ordinates must be nonnegative".into(),
            ));
        }
        if !self.eigen_gammas.windows(2).all(|w| w[0] <= w[1]) {
            return Err(SelbergError::Validation(
                "eigenvalue ordinates must be ascending".into(),
            ));
        }
        if self.lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(SelbergError::Validation(
                "geodesic lengths must be positive".into(),
            ));
        }
        if !self.lengths.windows(2).all(|w| w[0] <= w[1]) {
            return Err(SelbergError::Validation(
                "geodesic lengths must be ascending".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SelbergError> {
        let data: SelbergData =
            serde_json::from_str(text).map_err(|e| SelbergError::Json(e.to_string()))?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail")
    }
}

/// The remainder kernel `cosh(t/2) / sinh^2(t/2)`, even with a double
/// pole at 0.
pub fn remainder_kernel(t: f64) -> f64 {
    let s = (t / 2.0).sinh();
    (t / 2.0).cosh() / (s * s)
}

// support interval of phi, rejecting anything touching the kernel pole
fn support_away_from_zero(phi: &TestFunction) -> Result<(f64, f64), SelbergError> {
    let (lo, hi) = phi.support();
    if lo <= 0.0 && hi >= 0.0 {
        return Err(SelbergError::Validation(format!(
            "test-function support [{lo:.3}, {hi:.3}] touches the remainder pole at 0"
        )));
    }
    Ok((lo, hi))
}

/// `-(h-1)/2 int cosh(t/2)/sinh^2(t/2) phi(t) dt` over the support of
/// `phi`.
pub fn remainder_pairing(phi: &TestFunction, genus: u32) -> Result<Complex64, SelbergError> {
    let (lo, hi) = support_away_from_zero(phi)?;
    let (integral, _) = quad::adaptive(
        |t| Complex64::new(remainder_kernel(t) * phi.eval(t), 0.0),
        lo,
        hi,
        1e-13,
        1 << 20,
    )?;
    Ok(-0.5 * (genus as f64 - 1.0) * integral)
}

// geodesic side: sum over lengths and repetition counts within reach
fn length_side(data: &SelbergData, phi: &TestFunction, reach: f64) -> f64 {
    let mut acc = KahanSum::new();
    for &tau in &data.lengths {
        let mut l = 1.0f64;
        while tau * l <= reach {
            let weight = tau / (4.0 * (tau * l / 2.0).sinh());
            let x = tau * l;
            acc.add(weight * (phi.eval(x) + phi.eval(-x)));
            l += 1.0;
        }
    }
    acc.value()
}

// eigenvalue side with its last-decade tail
fn eigen_side(
    data: &SelbergData,
    phi: &TestFunction,
) -> Result<(Complex64, f64), QuadratureStall> {
    let mut acc = Complex64::new(0.0, 0.0);
    let top = data.eigen_gammas.last().copied().unwrap_or(0.0);
    let mut tail = 0.0;
    for &gamma in &data.eigen_gammas {
        let pair = phi.fourier_hat(Complex64::new(gamma, 0.0))?
            + phi.fourier_hat(Complex64::new(-gamma, 0.0))?;
        acc += 0.5 * pair;
        if gamma > 0.1 * top && top > 0.0 {
            tail += 0.5 * pair.norm();
        }
    }
    Ok((acc, tail))
}

/// Pairs both sides of the trace formula with `phi` and reports the
/// agreement.
pub fn selberg_instance_check(
    data: &SelbergData,
    phi: &TestFunction,
    tolerance: f64,
) -> Result<VerificationReport, SelbergError> {
    data.validate()?;
    let (lo, hi) = support_away_from_zero(phi)?;
    let reach = hi.max(-lo);
    let cutoff = data.lengths.last().copied().unwrap_or(0.0);
    let insufficient = data.eigen_gammas.is_empty() || data.lengths.is_empty();
    if !insufficient && reach > cutoff {
        return Err(SelbergError::CoverageGap {
            support_end: reach,
            cutoff,
        });
    }
    let (lhs, tail) = eigen_side(data, phi)?;
    if tail > tolerance {
        return Err(SelbergError::TailTooLarge {
            tail_estimate: tail,
            tolerance,
        });
    }
    let rhs = remainder_pairing(phi, data.genus)?
        + Complex64::new(length_side(data, phi, reach), 0.0);
    let mut params = params_from(&[
        ("genus", json!(data.genus)),
        ("eigen_count", json!(data.eigen_gammas.len())),
        ("length_count", json!(data.lengths.len())),
        ("tail_estimate", json!(tail)),
        ("test_function", json!(phi.spec_string())),
    ]);
    if insufficient {
        params.insert("insufficient_data".into(), json!(true));
    }
    Ok(VerificationReport::new(
        "selberg-instance",
        lhs,
        rhs,
        tolerance,
        params,
    ))
}

/// Completes a fixture by solving for one extra geodesic length in
/// `bracket` so the identity balances for `phi`; the residual of the
/// returned instance is bisection-limited.
pub fn solve_missing_length(
    base: &SelbergData,
    phi: &TestFunction,
    bracket: (f64, f64),
) -> Result<SelbergData, SelbergError> {
    base.validate()?;
    let with_tau = |tau: f64| {
        let mut data = base.clone();
        data.lengths.push(tau);
        data.lengths.sort_by(f64::total_cmp);
        data
    };
    let imbalance = |tau: f64| -> Result<f64, SelbergError> {
        let report = selberg_instance_check(&with_tau(tau), phi, f64::INFINITY)?;
        Ok(report.lhs.re - report.rhs.re)
    };
    let (mut a, mut b) = bracket;
    let mut fa = imbalance(a)?;
    let fb = imbalance(b)?;
    if fa == 0.0 {
        return Ok(with_tau(a));
    }
    if fb == 0.0 {
        return Ok(with_tau(b));
    }
    if fa.signum() == fb.signum() {
        return Err(SelbergError::Validation(format!(
            "no sign change on [{a}, {b}]: imbalance {fa:.3e} to {fb:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        let fm = imbalance(mid)?;
        if fm == 0.0 {
            a = mid;
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(with_tau(0.5 * (a + b)))
}
