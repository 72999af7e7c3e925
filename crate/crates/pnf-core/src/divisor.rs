//! Divisor location for finite Dirichlet series.
//!
//! All zeros live in a vertical strip: to the right the constant term 1
//! dominates, far left the highest-frequency term does.  Within the
//! strip the window is subdivided by winding counts until each cell
//! isolates one zero, then damped Newton polishes it.  Multiplicities
//! come from cell counts: a cell that cannot be split any further and
//! still counts `m` holds one zero of multiplicity `m`.
//!
//! Split lines are chosen by a minimum-modulus scan from a fixed offset
//! sequence, so subdivision is deterministic and children partition the
//! parent exactly; the counts can then be cross-checked against the sum.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{count_zeros_on, min_modulus_on_segment, ContourError, Rectangle};
use crate::series::DirichletSeries;
use crate::sum::ComplexKahanSum;

/// Cells below this diameter stop splitting and declare multiplicity.
pub const STALL_DIAMETER: f64 = 1e-8;
/// Newton polishing target: `|f(rho)| < NEWTON_RESIDUAL * term_scale`.
pub const NEWTON_RESIDUAL: f64 = 1e-12;

const SPLIT_GUARD: f64 = 1e-6;
const LINE_SCAN_POINTS: usize = 64;
// fractions of the split extent tried in order; irrational-ish spacing
// avoids resonating with periodic zero ladders
const SPLIT_OFFSETS: [f64; 11] = [
    0.0, 0.017, -0.017, 0.034, -0.034, 0.051, -0.051, 0.081, -0.081, 0.13, -0.13,
];

#[derive(Debug, Error)]
pub enum DivisorError {
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error("refinement stalled near {at}: {detail}")]
    RefinementStall { at: Complex64, detail: String },
    #[error("divisor JSON rejected: {0}")]
    Json(String),
    #[error("divisor validation failed: {0}")]
    Validation(String),
}

/// One divisor point: a zero (positive multiplicity) or pole (negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorPoint {
    pub location: Complex64,
    pub multiplicity: i64,
}

/// A finite multiset of zeros/poles found in (or supplied for) a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    window: Rectangle,
    points: Vec<DivisorPoint>,
}

#[derive(Serialize, Deserialize)]
struct PointRecord {
    re: f64,
    im: f64,
    mult: i64,
}

#[derive(Serialize, Deserialize)]
struct DivisorRecord {
    window: Rectangle,
    points: Vec<PointRecord>,
}

impl Divisor {
    pub fn new(window: Rectangle, mut points: Vec<DivisorPoint>) -> Result<Self, DivisorError> {
        if points.iter().any(|p| p.multiplicity == 0) {
            return Err(DivisorError::Validation(
                "multiplicity 0 point".to_string(),
            ));
        }
        points.sort_by(|a, b| {
            a.location
                .im
                .total_cmp(&b.location.im)
                .then(a.location.re.total_cmp(&b.location.re))
        });
        Ok(Self { window, points })
    }

    pub fn window(&self) -> &Rectangle {
        &self.window
    }

    pub fn points(&self) -> &[DivisorPoint] {
        &self.points
    }

    /// Sum of multiplicities (poles count negatively).
    pub fn total_multiplicity(&self) -> i64 {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn to_json(&self) -> String {
        let record = DivisorRecord {
            window: self.window,
            points: self
                .points
                .iter()
                .map(|p| PointRecord {
                    re: p.location.re,
                    im: p.location.im,
                    mult: p.multiplicity,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&record).expect("divisor serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, DivisorError> {
        let record: DivisorRecord =
            serde_json::from_str(text).map_err(|e| DivisorError::Json(e.to_string()))?;
        if !(record.window.re_min < record.window.re_max
            && record.window.im_min < record.window.im_max)
        {
            return Err(DivisorError::Validation("degenerate window".to_string()));
        }
        Self::new(
            record.window,
            record
                .points
                .iter()
                .map(|p| DivisorPoint {
                    location: Complex64::new(p.re, p.im),
                    multiplicity: p.mult,
                })
                .collect(),
        )
    }
}

/// Finds every zero of the series with `|Im rho| <= H` (up to the small
/// deterministic window dilation), with multiplicities.
pub fn locate_divisor(series: &DirichletSeries, h: f64) -> Result<Divisor, DivisorError> {
    assert!(h > 0.0, "height must be positive");
    let (lo, hi) = zero_strip(series);
    let root = Rectangle::new(lo, hi, -h, h);
    let (total, window) = count_zeros_on(series, &root)?;
    let mut found: Vec<DivisorPoint> = Vec::new();
    subdivide(series, &window, total, &mut found)?;
    let located: i64 = found.iter().map(|p| p.multiplicity).sum();
    if located != total as i64 {
        return Err(DivisorError::Validation(format!(
            "located multiplicity {located} does not match window count {total}"
        )));
    }
    Divisor::new(window, found)
}

/// Strip `[lo, hi]` outside which the series cannot vanish, with margin.
fn zero_strip(series: &DirichletSeries) -> (f64, f64) {
    let hi = series.abscissa() + 0.5;
    let freqs = series.frequencies();
    let coeffs = series.coefficients();
    let n = freqs.len();
    let last_freq = freqs[n - 1];
    let last_mod = coeffs[n - 1].norm();
    // left of lo the last term exceeds the other n terms combined:
    // term k stays below last/(n+1) when
    // re < log(|a_N| / ((n+1) |a_k|)) / (lambda_N - lambda_k)
    let mut lo = (last_mod / (n as f64 + 1.0)).ln() / last_freq;
    for k in 0..n - 1 {
        let bound =
            (last_mod / ((n as f64 + 1.0) * coeffs[k].norm())).ln() / (last_freq - freqs[k]);
        lo = lo.min(bound);
    }
    (lo - 0.5, hi)
}

fn subdivide(
    series: &DirichletSeries,
    cell: &Rectangle,
    count: usize,
    out: &mut Vec<DivisorPoint>,
) -> Result<(), DivisorError> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        let rho = newton_refine(series, cell, 1)?;
        // trust the winding count over the iterate: a wide cell can hand
        // newton a start whose descent path hops into a neighbouring
        // basin, double-listing that zero and dropping this one.  When
        // the result lands outside the cell, fall through and split
        // until the isolated zero is the one the iteration reaches.
        if cell.contains(rho) {
            out.push(DivisorPoint { location: rho, multiplicity: 1 });
            return Ok(());
        }
    }
    if cell.diameter() < STALL_DIAMETER {
        let rho = newton_refine(series, cell, count as i64)?;
        out.push(DivisorPoint { location: rho, multiplicity: count as i64 });
        return Ok(());
    }
    let split_im = cell.height() >= cell.width();
    let (mid, extent) = if split_im {
        (0.5 * (cell.im_min + cell.im_max), cell.height())
    } else {
        (0.5 * (cell.re_min + cell.re_max), cell.width())
    };
    // guard relaxes as cells close in on a multiple zero, where |f| is
    // quadratically small everywhere nearby
    let mut guard = SPLIT_GUARD;
    while guard >= 1e-13 {
        for offset in SPLIT_OFFSETS {
            let at = mid + offset * extent;
            if !line_clear(series, cell, split_im, at, guard) {
                continue;
            }
            let (first, second) = split_cell(cell, split_im, at);
            let Some(c1) = winding_fixed(series, &first) else { continue };
            let Some(c2) = winding_fixed(series, &second) else { continue };
            if c1 + c2 != count {
                // a zero slipped between scan points of this line
                continue;
            }
            subdivide(series, &first, c1, out)?;
            subdivide(series, &second, c2, out)?;
            return Ok(());
        }
        guard *= 0.1;
    }
    if cell.diameter() < 1e-3 {
        // every candidate line is drowned by one tight cluster: treat as
        // a single zero of the full multiplicity
        let rho = newton_refine(series, cell, count as i64)?;
        out.push(DivisorPoint { location: rho, multiplicity: count as i64 });
        return Ok(());
    }
    Err(DivisorError::RefinementStall {
        at: cell.center(),
        detail: format!("no admissible split line for a cell counting {count}"),
    })
}

fn split_cell(cell: &Rectangle, split_im: bool, at: f64) -> (Rectangle, Rectangle) {
    if split_im {
        (
            Rectangle { im_max: at, ..*cell },
            Rectangle { im_min: at, ..*cell },
        )
    } else {
        (
            Rectangle { re_max: at, ..*cell },
            Rectangle { re_min: at, ..*cell },
        )
    }
}

/// True when `|f| / term_scale` stays above `guard` on the split line.
fn line_clear(
    series: &DirichletSeries,
    cell: &Rectangle,
    split_im: bool,
    at: f64,
    guard: f64,
) -> bool {
    let (a, b) = if split_im {
        (
            Complex64::new(cell.re_min, at),
            Complex64::new(cell.re_max, at),
        )
    } else {
        (
            Complex64::new(at, cell.im_min),
            Complex64::new(at, cell.im_max),
        )
    };
    let (_, rel) = min_modulus_on_segment(series, a, b, LINE_SCAN_POINTS);
    rel >= guard
}

/// Trapezoid winding without any geometry changes; `None` when it fails
/// to settle (caller picks a different split) or any boundary sample
/// sinks under the f64 noise floor, where counts are meaningless.
fn winding_fixed(series: &DirichletSeries, rect: &Rectangle) -> Option<usize> {
    let corners = rect.corners();
    let base: Vec<usize> = (0..4)
        .map(|e| crate::contour::edge_panels(series, corners[e], corners[(e + 1) % 4]))
        .collect();
    let mut previous: Option<i64> = None;
    let mut winding = f64::NAN;
    for doubling in 0..=14 {
        let mut acc = ComplexKahanSum::new();
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let n = base[e] << doubling;
            let h = (b - a) / n as f64;
            for j in 0..=n {
                let s = a + h * j as f64;
                let f = series.eval(s);
                if f.norm() < 1e-13 * series.term_scale(s) {
                    return None;
                }
                let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc.add(series.eval_derivative(s) / f * h * weight);
            }
        }
        let prior = winding;
        winding = (acc.value() / (2.0 * std::f64::consts::PI * Complex64::i())).re;
        let nearest = winding.round() as i64;
        if (winding - nearest as f64).abs() <= 0.25 && nearest >= 0 {
            if previous == Some(nearest) {
                return Some(nearest as usize);
            }
            previous = Some(nearest);
        } else {
            previous = None;
            // agreement on a non-integer value means a zero sits on the
            // contour; refining further cannot help
            if (winding - prior).abs() < 0.02 {
                return None;
            }
        }
    }
    None
}

/// Lowest `|f| / term_scale` sample on an interior grid of the cell;
/// a basin-aware Newton start, since the center of a tall cell can sit
/// between zeros where the Newton map escapes toward `f -> 1`.
fn best_interior_start(series: &DirichletSeries, cell: &Rectangle) -> Complex64 {
    let cols = 5;
    // resolve the vertical oscillation so some sample lands in-basin
    let rows = 7usize.max((2.0 * cell.height()).ceil() as usize).min(512);
    let mut best = cell.center();
    let mut best_rel = f64::INFINITY;
    for i in 0..cols {
        let re = cell.re_min + cell.width() * (i as f64 + 0.5) / cols as f64;
        for j in 0..rows {
            let im = cell.im_min + cell.height() * (j as f64 + 0.5) / rows as f64;
            let s = Complex64::new(re, im);
            let rel = series.eval(s).norm() / series.term_scale(s);
            if rel < best_rel {
                best_rel = rel;
                best = s;
            }
        }
    }
    best
}

/// Damped Newton on `f`, with the multiplicity-adjusted step
/// `m f / f'` so multiple zeros converge quadratically too.  Iterates
/// are confined to a dilation of the counted cell: the zero is inside,
/// and unconstrained steps can drift into the half plane where
/// `|f| -> 1` offers endless spurious descent.
fn newton_refine(
    series: &DirichletSeries,
    cell: &Rectangle,
    multiplicity: i64,
) -> Result<Complex64, DivisorError> {
    let bounds = cell.dilated(2.0);
    let mut s = best_interior_start(series, cell);
    let m = multiplicity as f64;
    for _ in 0..120 {
        let f = series.eval(s);
        let converged = f.norm() < NEWTON_RESIDUAL * series.term_scale(s);
        let df = series.eval_derivative(s);
        if df.norm() == 0.0 {
            if converged {
                return Ok(s);
            }
            // saddle of f: nudge off it deterministically
            s += Complex64::new(1e-9, 1e-9);
            continue;
        }
        let step = m * f / df;
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let cand = s - alpha * step;
            if bounds.contains(cand) && series.eval(cand).norm() < f.norm() {
                s = cand;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            // at the floor of what evaluation noise permits; for a
            // multiple zero the residual alone is met on a whole disk, so
            // iteration continues until steps stop paying off
            if converged {
                return Ok(s);
            }
            return Err(DivisorError::RefinementStall {
                at: s,
                detail: format!("no descent direction, |f| = {:.3e}", f.norm()),
            });
        }
    }
    let f = series.eval(s);
    if f.norm() < NEWTON_RESIDUAL * series.term_scale(s) {
        return Ok(s);
    }
    Err(DivisorError::RefinementStall {
        at: s,
        detail: "newton iteration budget exhausted".to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::count_zeros;
    use std::f64::consts::PI;

    fn series(coeffs: &[f64], freqs: &[f64]) -> DirichletSeries {
        DirichletSeries::new(
            freqs.to_vec(),
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            None,
            None,
        )
        .unwrap()
    }

    fn assert_point(divisor: &Divisor, re: f64, im: f64, mult: i64, tol: f64) {
        let hit = divisor
            .points()
            .iter()
            .find(|p| (p.location - Complex64::new(re, im)).norm() < tol);
        let p = hit.unwrap_or_else(|| panic!("no zero near {re}+{im}i in {divisor:?}"));
        assert_eq!(p.multiplicity, mult, "multiplicity at {re}+{im}i");
    }

    #[test]
    fn geometric_ladder_up_to_height_twenty() {
        let f = series(&[-1.0], &[1.0]);
        let d = locate_divisor(&f, 20.0).unwrap();
        assert_eq!(d.total_multiplicity(), 7);
        for k in -3i32..=3 {
            assert_point(&d, 0.0, 2.0 * PI * k as f64, 1, 1e-9);
        }
    }

    #[test]
    fn cyclotomic_zeros_at_thirds() {
        let f = series(&[1.0, 1.0], &[1.0, 2.0]);
        let d = locate_divisor(&f, 10.0).unwrap();
        assert_eq!(d.total_multiplicity(), 6);
        for im in [
            2.0 * PI / 3.0,
            -2.0 * PI / 3.0,
            4.0 * PI / 3.0,
            -4.0 * PI / 3.0,
            8.0 * PI / 3.0,
            -8.0 * PI / 3.0,
        ] {
            assert_point(&d, 0.0, im, 1, 1e-9);
        }
    }

    #[test]
    fn squared_factor_multiplicities() {
        let f = series(&[-2.0, 1.0], &[1.0, 2.0]);
        let d = locate_divisor(&f, 7.0).unwrap();
        assert_eq!(d.total_multiplicity(), 6);
        assert_point(&d, 0.0, 0.0, 2, 1e-6);
        assert_point(&d, 0.0, 2.0 * PI, 2, 1e-6);
        assert_point(&d, 0.0, -2.0 * PI, 2, 1e-6);
    }

    #[test]
    fn residuals_meet_the_scale_bound() {
        let f = series(&[0.5, 0.25], &[1.0, std::f64::consts::SQRT_2]);
        let d = locate_divisor(&f, 30.0).unwrap();
        assert!(!d.points().is_empty());
        for p in d.points() {
            let r = f.eval(p.location).norm();
            assert!(
                r < 1e-10 * f.term_scale(p.location),
                "residual {r:.2e} at {}",
                p.location
            );
        }
    }

    #[test]
    fn conjugate_symmetry_for_real_series() {
        let f = series(&[0.5, 0.25], &[1.0, std::f64::consts::SQRT_2]);
        let d = locate_divisor(&f, 30.0).unwrap();
        for p in d.points() {
            let mirror = p.location.conj();
            let twin = d
                .points()
                .iter()
                .find(|q| (q.location - mirror).norm() < 1e-8)
                .expect("conjugate zero present");
            assert_eq!(twin.multiplicity, p.multiplicity);
        }
    }

    #[test]
    fn window_count_matches_total_multiplicity() {
        let f = series(&[1.0, 1.0], &[1.0, 2.0]);
        let d = locate_divisor(&f, 10.0).unwrap();
        let recount = count_zeros(&f, d.window()).unwrap();
        assert_eq!(recount as i64, d.total_multiplicity());
    }

    #[test]
    fn zero_count_grows_with_height() {
        let f = series(&[-1.0], &[1.0]);
        let small = locate_divisor(&f, 10.0).unwrap().total_multiplicity();
        let large = locate_divisor(&f, 20.0).unwrap().total_multiplicity();
        assert!(large > small, "{large} vs {small}");
    }

    #[test]
    fn json_round_trip_preserves_everything() {
        let f = series(&[1.0, 1.0], &[1.0, 2.0]);
        let d = locate_divisor(&f, 10.0).unwrap();
        let back = Divisor::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(Divisor::from_json("{\"window\":5}").is_err());
        let degenerate = r#"{"window":{"re_min":1.0,"re_max":0.0,"im_min":0.0,"im_max":1.0},"points":[]}"#;
        assert!(matches!(
            Divisor::from_json(degenerate),
            Err(DivisorError::Validation(_))
        ));
    }
}
