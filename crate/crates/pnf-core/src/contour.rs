//! Winding-number zero counts on rectangles.
//!
//! A finite Dirichlet series is entire, so the number of zeros inside a
//! rectangle is `(1/2 pi i) contour-integral of f'/f`.  The integrand is
//! smooth as long as no zero sits on the boundary; a minimum-modulus
//! scan detects that case and the rectangle is dilated by factors from a
//! fixed sequence, so reruns see identical contours.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::DirichletSeries;
use crate::sum::ComplexKahanSum;

/// Boundary points with `|f|` below this multiple of the term scale make
/// the winding integral untrustworthy.
pub const CONTOUR_GUARD: f64 = 1e-7;

/// Dilation factors tried in order when a zero sits too close to the
/// boundary: `1 + 1e-3 * 2.3^k`.
pub const MAX_DILATIONS: usize = 8;

const SCAN_POINTS: usize = 96;
const MAX_EDGE_DOUBLINGS: u32 = 14;

#[derive(Debug, Error)]
pub enum ContourError {
    #[error(
        "a zero stays within guard distance of the contour after {MAX_DILATIONS} dilations \
         (min |f| = {min_modulus:.3e} at {at})"
    )]
    ContourTooClose { at: Complex64, min_modulus: f64 },
    #[error(
        "winding number failed to settle near an integer (last value {winding:.6} after \
         {evaluations} integrand evaluations)"
    )]
    NonIntegerWinding { winding: f64, evaluations: usize },
}

/// Axis-aligned rectangle in the `s` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        assert!(re_min < re_max && im_min < im_max, "degenerate rectangle");
        Self { re_min, re_max, im_min, im_max }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, s: Complex64) -> bool {
        self.re_min <= s.re && s.re <= self.re_max && self.im_min <= s.im && s.im <= self.im_max
    }

    /// Scales both side lengths by `factor` about the center.
    pub fn dilated(&self, factor: f64) -> Self {
        let c = self.center();
        let hw = 0.5 * self.width() * factor;
        let hh = 0.5 * self.height() * factor;
        Self {
            re_min: c.re - hw,
            re_max: c.re + hw,
            im_min: c.im - hh,
            im_max: c.im + hh,
        }
    }

    /// Corners in counterclockwise order starting bottom left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// Counts zeros of the series inside `rect` with multiplicity.
///
/// The rectangle may be dilated (never shrunk) when a zero hugs the
/// boundary, so callers subdividing a region should pick split lines
/// away from zeros if they need exact partitions.
pub fn count_zeros(series: &DirichletSeries, rect: &Rectangle) -> Result<usize, ContourError> {
    count_zeros_on(series, rect).map(|(count, _)| count)
}

/// As `count_zeros`, also reporting the rectangle actually integrated
/// over (identical to the input unless dilation was needed).
pub fn count_zeros_on(
    series: &DirichletSeries,
    rect: &Rectangle,
) -> Result<(usize, Rectangle), ContourError> {
    let mut worst: Option<(Complex64, f64)> = None;
    for k in 0..=MAX_DILATIONS {
        let candidate = if k == 0 {
            *rect
        } else {
            rect.dilated(1.0 + 1e-3 * 2.3f64.powi(k as i32 - 1))
        };
        match boundary_min_modulus(series, &candidate) {
            Ok(()) => return winding_count(series, &candidate).map(|n| (n, candidate)),
            Err((at, min_modulus)) => {
                let keep = worst.map_or(true, |(_, m)| min_modulus < m);
                if keep {
                    worst = Some((at, min_modulus));
                }
            }
        }
    }
    let (at, min_modulus) = worst.unwrap();
    Err(ContourError::ContourTooClose { at, min_modulus })
}

/// Scans the boundary for points where `|f|` dips under the guard level.
fn boundary_min_modulus(
    series: &DirichletSeries,
    rect: &Rectangle,
) -> Result<(), (Complex64, f64)> {
    let corners = rect.corners();
    let mut min_at = corners[0];
    let mut min_rel = f64::INFINITY;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let (at, rel) = min_modulus_on_segment(series, a, b, SCAN_POINTS);
        if rel < min_rel {
            min_rel = rel;
            min_at = at;
        }
    }
    if min_rel < CONTOUR_GUARD {
        Err((min_at, min_rel))
    } else {
        Ok(())
    }
}

/// Minimum of `|f| / term_scale` along a segment: coarse grid scan, then
/// ternary descent around the lowest sample.  The descent step matters
/// because a zero sitting almost exactly on the segment produces a dip
/// far narrower than the grid spacing.
pub(crate) fn min_modulus_on_segment(
    series: &DirichletSeries,
    a: Complex64,
    b: Complex64,
    coarse: usize,
) -> (Complex64, f64) {
    let rel_at = |t: f64| {
        let s = a + (b - a) * t;
        series.eval(s).norm() / series.term_scale(s)
    };
    let mut best_j = 0usize;
    let mut best = f64::INFINITY;
    for j in 0..=coarse {
        let rel = rel_at(j as f64 / coarse as f64);
        if rel < best {
            best = rel;
            best_j = j;
        }
    }
    let mut lo = best_j.saturating_sub(1) as f64 / coarse as f64;
    let mut hi = (best_j + 1).min(coarse) as f64 / coarse as f64;
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if rel_at(m1) <= rel_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = 0.5 * (lo + hi);
    let refined = rel_at(t);
    if refined < best {
        (a + (b - a) * t, refined)
    } else {
        (a + (b - a) * (best_j as f64 / coarse as f64), best)
    }
}

/// Panels per edge that resolve the oscillation of `f'/f`: eight
/// samples per `2 pi / lambda_N` period, floored at 32.  Without this
/// floor two equally aliased sweeps along a tall edge can agree on a
/// non-integer winding and masquerade as a pole on the contour.
pub(crate) fn edge_panels(series: &DirichletSeries, a: Complex64, b: Complex64) -> usize {
    let lambda = series.frequencies().last().copied().unwrap_or(0.0);
    32usize.max((1.28 * (b - a).norm() * lambda).ceil() as usize)
}

/// Composite trapezoid of `f'/f` per edge, doubled until the winding is
/// within 0.25 of the same integer on two successive refinements.
fn winding_count(series: &DirichletSeries, rect: &Rectangle) -> Result<usize, ContourError> {
    let corners = rect.corners();
    let base: Vec<usize> = (0..4)
        .map(|e| edge_panels(series, corners[e], corners[(e + 1) % 4]))
        .collect();
    let mut evaluations = 0usize;
    let mut previous: Option<(f64, i64)> = None;
    let mut winding = f64::NAN;
    for doubling in 0..=MAX_EDGE_DOUBLINGS {
        let mut acc = ComplexKahanSum::new();
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let n = base[e] << doubling;
            let h = (b - a) / n as f64;
            for j in 0..=n {
                // boundary scan already rejected near-zero moduli, so the
                // quotient is formed directly
                let s = a + h * j as f64;
                let g = series.eval_derivative(s) / series.eval(s);
                let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc.add(g * h * weight);
                evaluations += 1;
            }
        }
        let prior = winding;
        winding = (acc.value() / (2.0 * std::f64::consts::PI * Complex64::i())).re;
        let nearest = winding.round() as i64;
        let settled = (winding - nearest as f64).abs() <= 0.25;
        if settled {
            if let Some((_, prev_nearest)) = previous {
                if prev_nearest == nearest && nearest >= 0 {
                    return Ok(nearest as usize);
                }
            }
            previous = Some((winding, nearest));
        } else {
            previous = None;
            // refinements agreeing on a non-integer value mean a pole on
            // the contour itself; more points cannot fix that
            if (winding - prior).abs() < 0.02 {
                break;
            }
        }
    }
    Err(ContourError::NonIntegerWinding { winding, evaluations })
}
