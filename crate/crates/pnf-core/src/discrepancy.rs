//! Discrepancy constants from truncated divisor sums.
//!
//! For a finite Dirichlet series the regularized Hadamard quotient
//! differs from `f'/f` by a constant `c0(sigma)` depending on the
//! expansion origin.  Both routines here share one numerical idea:
//! conjugate-pair truncated sums over the divisor converge like `C/H`,
//! so evaluating at `H` and `H/2` gives both a measured tail estimate
//! `|S(H) - S(H/2)|` and the Richardson value `2 S(H) - S(H/2)` whose
//! error falls like `1/H^2`.

use num_complex::Complex64;
use thiserror::Error;

use crate::divisor::Divisor;
use crate::series::DirichletSeries;
use crate::sum::ComplexKahanSum;

/// Divisor points within this distance of a probe are treated as equal.
pub const POINT_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DiscrepancyError {
    #[error("tail estimate {tail_estimate:.3e} exceeds tolerance {tolerance:.3e}; raise the truncation height")]
    TailTooLarge { tail_estimate: f64, tolerance: f64 },
    #[error("discrepancy input invalid: {0}")]
    Validation(String),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

/// The constant term of the discrepancy polynomial at origin `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyConstant {
    pub sigma: Complex64,
    pub c0: Complex64,
    pub d: u32,
    pub truncation_height: f64,
    pub tail_estimate: f64,
}

/// Total multiplicity the divisor carries at the point `z`.
pub fn multiplicity_at(divisor: &Divisor, z: Complex64) -> i64 {
    divisor
        .points()
        .iter()
        .filter(|p| (p.location - z).norm() < POINT_MATCH_TOL)
        .map(|p| p.multiplicity)
        .sum()
}

/// `c0(sigma)` from the regularized divisor sum
/// `G(s0) = n_sigma/(s0-sigma)
///        + sum n_rho (s0-sigma)^{d-1} / (rho-sigma)^{d-1} / (s0-rho)`
/// minus `f'(s0)/f(s0)`, Richardson-corrected across the top octave of
/// the truncation height.
pub fn discrepancy_c0(
    series: &DirichletSeries,
    divisor: &Divisor,
    sigma: Complex64,
    s0: Complex64,
    d: u32,
    tolerance: f64,
) -> Result<DiscrepancyConstant, DiscrepancyError> {
    if d < 2 {
        return Err(DiscrepancyError::Validation(format!(
            "convergence exponent d = {d} below 2"
        )));
    }
    if s0.re <= series.abscissa() {
        return Err(DiscrepancyError::Validation(format!(
            "s0 = {s0} is not to the right of the zero region (abscissa {:.6})",
            series.abscissa()
        )));
    }
    if multiplicity_at(divisor, s0) != 0 {
        return Err(DiscrepancyError::Validation(
            "s0 lies on the divisor".to_string(),
        ));
    }
    let h = divisor.window().im_max;
    let log_deriv = series.log_derivative(s0)?;
    let at = |limit: f64| -> Complex64 {
        let g = truncated_g(divisor, sigma, s0, d, limit);
        g - log_deriv
    };
    let full = at(h);
    let half = at(0.5 * h);
    let c0 = 2.0 * full - half;
    let tail_estimate = (full - half).norm();
    if tail_estimate > tolerance {
        return Err(DiscrepancyError::TailTooLarge { tail_estimate, tolerance });
    }
    Ok(DiscrepancyConstant { sigma, c0, d, truncation_height: h, tail_estimate })
}

/// The `G` sum over divisor points with `|Im rho| <= limit`, conjugate
/// pairs adjacent in the accumulation order.
fn truncated_g(
    divisor: &Divisor,
    sigma: Complex64,
    s0: Complex64,
    d: u32,
    limit: f64,
) -> Complex64 {
    let mut acc = ComplexKahanSum::new();
    let n_sigma = multiplicity_at(divisor, sigma);
    if n_sigma != 0 {
        acc.add(n_sigma as f64 / (s0 - sigma));
    }
    for p in sorted_by_height(divisor, |z| z.im.abs() <= limit) {
        let rho = p.0;
        if (rho - sigma).norm() < POINT_MATCH_TOL {
            continue;
        }
        let ratio = (s0 - sigma) / (rho - sigma);
        acc.add(p.1 as f64 * ratio.powi(d as i32 - 1) / (s0 - rho));
    }
    acc.value()
}

/// Shifts `c0` from origin 0 to origin `sigma` using only the divisor:
/// `c0(sigma) = c0(0) - [ n_0/sigma + n_sigma/sigma
///                      + sum_{rho != 0, sigma} n_rho (-sigma)/(rho (rho-sigma)) ]`,
/// with points truncated by `|rho| <= H` and the same octave Richardson
/// correction.  Returns the value and the measured tail estimate.
pub fn c0_shift(
    c0_at_0: Complex64,
    divisor: &Divisor,
    sigma: Complex64,
    tolerance: f64,
) -> Result<(Complex64, f64), DiscrepancyError> {
    if sigma.norm() < POINT_MATCH_TOL {
        return Err(DiscrepancyError::Validation(
            "shift origin sigma must be nonzero".to_string(),
        ));
    }
    let h = shift_radius(divisor);
    let origin = Complex64::new(0.0, 0.0);
    let at = |limit: f64| -> Complex64 {
        let mut acc = ComplexKahanSum::new();
        let n_0 = multiplicity_at(divisor, origin);
        if n_0 != 0 {
            acc.add(n_0 as f64 / sigma);
        }
        let n_sigma = multiplicity_at(divisor, sigma);
        if n_sigma != 0 {
            acc.add(n_sigma as f64 / sigma);
        }
        for p in sorted_by_height(divisor, |z| z.norm() <= limit) {
            let rho = p.0;
            if rho.norm() < POINT_MATCH_TOL || (rho - sigma).norm() < POINT_MATCH_TOL {
                continue;
            }
            acc.add(p.1 as f64 * (-sigma) / (rho * (rho - sigma)));
        }
        acc.value()
    };
    let full = at(h);
    let half = at(0.5 * h);
    let correction = 2.0 * full - half;
    let tail_estimate = (full - half).norm();
    if tail_estimate > tolerance {
        return Err(DiscrepancyError::TailTooLarge { tail_estimate, tolerance });
    }
    Ok((c0_at_0 - correction, tail_estimate))
}

/// Pair-truncated `K1(sigma) = sum_{rho != sigma} n_rho / (rho - sigma)`,
/// the regularization constant separating the symmetric divisor pairing
/// from its naive truncation.  Richardson-corrected like the others.
pub fn divisor_k1(divisor: &Divisor, sigma: Complex64) -> Complex64 {
    let h = shift_radius(divisor);
    let at = |limit: f64| -> Complex64 {
        let mut acc = ComplexKahanSum::new();
        for p in sorted_by_height(divisor, |z| z.norm() <= limit) {
            let rho = p.0;
            if (rho - sigma).norm() < POINT_MATCH_TOL {
                continue;
            }
            acc.add(p.1 as f64 / (rho - sigma));
        }
        acc.value()
    };
    2.0 * at(h) - at(0.5 * h)
}

/// Largest point radius, used as the truncation for radial sums.
fn shift_radius(divisor: &Divisor) -> f64 {
    divisor
        .points()
        .iter()
        .map(|p| p.location.norm())
        .fold(0.0, f64::max)
}

/// Points passing `keep`, sorted so conjugate partners sit next to each
/// other (ascending `|Im|`, then `Im`, then `Re`).
fn sorted_by_height(
    divisor: &Divisor,
    keep: impl Fn(Complex64) -> bool,
) -> Vec<(Complex64, i64)> {
    let mut points: Vec<(Complex64, i64)> = divisor
        .points()
        .iter()
        .filter(|p| keep(p.location))
        .map(|p| (p.location, p.multiplicity))
        .collect();
    points.sort_by(|a, b| {
        a.0.im
            .abs()
            .total_cmp(&b.0.im.abs())
            .then(a.0.im.total_cmp(&b.0.im))
            .then(a.0.re.total_cmp(&b.0.re))
    });
    points
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::Rectangle;
    use crate::digamma::digamma;
    use crate::divisor::DivisorPoint;
    use std::f64::consts::PI;

    const EULER_GAMMA: f64 = 0.57721566490153286060651209008240;

    /// Exact zero ladder of 1 - e^{-lambda s} up to height `h`.
    fn ladder_divisor(lambda: f64, h: f64) -> Divisor {
        let spacing = 2.0 * PI / lambda;
        let mut points = vec![DivisorPoint {
            location: Complex64::new(0.0, 0.0),
            multiplicity: 1,
        }];
        let mut k = 1.0;
        while k * spacing <= h {
            for sign in [1.0, -1.0] {
                points.push(DivisorPoint {
                    location: Complex64::new(0.0, sign * k * spacing),
                    multiplicity: 1,
                });
            }
            k += 1.0;
        }
        Divisor::new(Rectangle::new(-1.0, 1.0, -h, h), points).unwrap()
    }

    /// Divisor of points at -2n, n = 0..count, multiplicity 1.
    fn even_negative_divisor(count: usize) -> Divisor {
        let points = (0..=count)
            .map(|n| DivisorPoint {
                location: Complex64::new(-2.0 * n as f64, 0.0),
                multiplicity: 1,
            })
            .collect();
        let h = 2.0 * count as f64 + 1.0;
        Divisor::new(Rectangle::new(-h, 1.0, -1.0, 1.0), points).unwrap()
    }

    #[test]
    fn geometric_factor_constant_is_half_lambda() {
        for lambda in [1.0, 2.0, PI] {
            let f = DirichletSeries::geometric_factor(lambda);
            let d = ladder_divisor(lambda, 1e4);
            let r = discrepancy_c0(
                &f,
                &d,
                Complex64::new(0.0, 0.0),
                Complex64::new(3.0, 0.0),
                2,
                1e-3,
            )
            .unwrap();
            assert!(
                (r.c0 - Complex64::new(lambda / 2.0, 0.0)).norm() < 5e-7,
                "lambda = {lambda}: c0 = {}",
                r.c0
            );
            assert!(r.tail_estimate > 0.0);
        }
    }

    #[test]
    fn independent_of_the_probe_point() {
        let f = DirichletSeries::geometric_factor(1.0);
        let d = ladder_divisor(1.0, 1e4);
        let sigma = Complex64::new(0.0, 0.0);
        let a = discrepancy_c0(&f, &d, sigma, Complex64::new(3.0, 0.0), 2, 1e-3).unwrap();
        let b = discrepancy_c0(&f, &d, sigma, Complex64::new(5.0, 1.0), 2, 1e-3).unwrap();
        assert!(
            (a.c0 - b.c0).norm() <= 2.0 * (a.tail_estimate + b.tail_estimate),
            "{} vs {}",
            a.c0,
            b.c0
        );
    }

    #[test]
    fn origin_off_the_divisor_reproduces_coth_value() {
        // for 1 - e^{-s} at origin 1: c0(1) = (1 - coth(1/2))/2
        let f = DirichletSeries::geometric_factor(1.0);
        let d = ladder_divisor(1.0, 1e4);
        let want = 0.5 * (1.0 - 1.0 / (0.5f64).tanh());
        let r = discrepancy_c0(
            &f,
            &d,
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 0.0),
            2,
            1e-3,
        )
        .unwrap();
        assert!((r.c0.re - want).abs() < 5e-7, "c0(1) = {}, want {want}", r.c0);
        assert!(r.c0.im.abs() < 1e-9);
    }

    #[test]
    fn tail_too_large_fires_on_short_divisors() {
        let f = DirichletSeries::geometric_factor(1.0);
        let d = ladder_divisor(1.0, 100.0);
        let err = discrepancy_c0(
            &f,
            &d,
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
            2,
            1e-9,
        )
        .unwrap_err();
        assert!(matches!(err, DiscrepancyError::TailTooLarge { .. }));
    }

    #[test]
    fn probe_inside_zero_region_is_rejected() {
        let f = DirichletSeries::geometric_factor(1.0);
        let d = ladder_divisor(1.0, 100.0);
        let err = discrepancy_c0(
            &f,
            &d,
            Complex64::new(0.0, 0.0),
            Complex64::new(-2.0, 0.0),
            2,
            1e-3,
        )
        .unwrap_err();
        assert!(matches!(err, DiscrepancyError::Validation(_)));
    }

    #[test]
    fn shift_is_continuous_at_tiny_sigma() {
        // divisor avoiding 0: the shift vanishes as sigma -> 0
        let mut points = Vec::new();
        for k in 1..=2000 {
            for sign in [1.0, -1.0] {
                points.push(DivisorPoint {
                    location: Complex64::new(0.1, sign * 2.0 * PI * k as f64),
                    multiplicity: 1,
                });
            }
        }
        let d = Divisor::new(Rectangle::new(-1.0, 1.0, -13000.0, 13000.0), points).unwrap();
        let c0 = Complex64::new(0.7, 0.0);
        let (shifted, _) = c0_shift(c0, &d, Complex64::new(1e-6, 0.0), 1e-3).unwrap();
        assert!((shifted - c0).norm() < 1e-5);
    }

    #[test]
    fn shift_agrees_with_direct_recomputation() {
        let f = DirichletSeries::geometric_factor(1.0);
        let d = ladder_divisor(1.0, 1e4);
        let origin = discrepancy_c0(
            &f,
            &d,
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
            2,
            1e-3,
        )
        .unwrap();
        let direct = discrepancy_c0(
            &f,
            &d,
            Complex64::new(1.0, 0.0),
            Complex64::new(3.0, 0.0),
            2,
            1e-3,
        )
        .unwrap();
        let (shifted, tail) = c0_shift(origin.c0, &d, Complex64::new(1.0, 0.0), 1e-3).unwrap();
        let budget = 2.0 * (origin.tail_estimate + direct.tail_estimate + tail);
        assert!(
            (shifted - direct.c0).norm() <= budget.max(1e-9),
            "shift {shifted} vs direct {}",
            direct.c0
        );
    }

    #[test]
    fn even_negative_ladder_matches_digamma_closed_form() {
        // points at -2n with multiplicity 1 shift by psi(sigma/2)/2 + gamma/2
        let d = even_negative_divisor(50_000);
        let sigma = Complex64::new(0.5, 0.0);
        let (shifted, _) = c0_shift(Complex64::new(0.0, 0.0), &d, sigma, 1e-3).unwrap();
        let psi = digamma(sigma / 2.0).unwrap();
        let want = 0.5 * psi + EULER_GAMMA / 2.0;
        assert!(
            (shifted - want).norm() < 1e-8,
            "shift {shifted} vs closed form {want}"
        );
    }

    #[test]
    fn k1_vanishes_on_symmetric_ladders() {
        let d = ladder_divisor(1.0, 1e4);
        let k1 = divisor_k1(&d, Complex64::new(0.0, 0.0));
        assert!(k1.norm() < 1e-12, "K1 = {k1}");
        // and relates c0(sigma) to c0(0) through the mean density:
        // c0(sigma) = lambda/2 + K1(sigma) for the geometric factor
        let k1_at_1 = divisor_k1(&d, Complex64::new(1.0, 0.0));
        let want = 0.5 * (1.0 - 1.0 / (0.5f64).tanh());
        assert!((0.5 + k1_at_1.re - want).abs() < 5e-7, "K1(1) = {k1_at_1}");
    }
}
