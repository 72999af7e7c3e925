//! The two pairings realizing both sides of the summation formula.
//!
//! Divisor side: each zero contributes the exponential moment
//! `n_rho integral phi(t) e^{(rho-beta)t} dt` over the half line, or
//! with `|t|` in the symmetric variant.  Conjugate pairs are summed
//! together before accumulation: their oscillatory parts cancel there,
//! which is what makes the sum converge superpolynomially for smooth
//! test functions.
//!
//! Atom side: a finite sum of weighted point evaluations of phi, with a
//! mirrored copy of each atom in the symmetric variant.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::divisor::Divisor;
use crate::lattice::AtomMeasure;
use crate::quad::QuadratureStall;
use crate::sum::ComplexKahanSum;
use crate::testfn::{TestFunction, TestFunctionKind, GAUSSIAN_SUPPORT_LEVEL};

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("tail estimate {tail_estimate:.3e} exceeds tolerance {tolerance:.3e}; the divisor height is insufficient for this test function")]
    TailTooLarge { tail_estimate: f64, tolerance: f64 },
    #[error("test-function support reaches {support_end:.3} but atoms stop at {cutoff:.3}")]
    CoverageGap { support_end: f64, cutoff: f64 },
    #[error("pairing input invalid: {0}")]
    Validation(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureStall),
}

/// A truncated pairing value with its measured tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingResult {
    pub value: Complex64,
    pub truncation: f64,
    pub tail_estimate: f64,
}

/// `sum_rho n_rho integral phi(t) e^{(rho-beta)t} dt`, over `(0, inf)`
/// one-sided or with `e^{(rho-beta)|t|}` over the line when `symmetric`.
///
/// Zeros are grouped into conjugate pairs and summed in ascending
/// `|Im rho|`; the tail estimate is the total modulus contributed by the
/// last decade of heights below the window boundary, a deliberate
/// overestimate of the true remainder for smooth test functions (pair
/// contributions decay superpolynomially by integration by parts).
pub fn divisor_pairing(
    divisor: &Divisor,
    phi: &TestFunction,
    beta: f64,
    symmetric: bool,
    tolerance: f64,
) -> Result<PairingResult, PairingError> {
    if !symmetric && phi.support().0 <= 0.0 {
        return Err(PairingError::Validation(format!(
            "one-sided pairing needs supp phi inside (0, inf); support starts at {:.3}",
            phi.support().0
        )));
    }
    let mut points: Vec<(Complex64, i64)> = divisor
        .points()
        .iter()
        .map(|p| (p.location, p.multiplicity))
        .collect();
    points.sort_by(|a, b| {
        a.0.im
            .abs()
            .total_cmp(&b.0.im.abs())
            .then(a.0.im.total_cmp(&b.0.im))
            .then(a.0.re.total_cmp(&b.0.re))
    });
    // group conjugate partners so each group is one cancellation unit
    let mut groups: Vec<Vec<(Complex64, i64)>> = Vec::new();
    let mut iter = points.into_iter().peekable();
    while let Some(p) = iter.next() {
        let mut group = vec![p];
        if p.0.im.abs() > 1e-12 {
            if let Some(&q) = iter.peek() {
                if (q.0 - p.0.conj()).norm() < 1e-9 {
                    group.push(q);
                    iter.next();
                }
            }
        }
        groups.push(group);
    }
    let contributions: Vec<Result<(f64, Complex64), QuadratureStall>> = groups
        .par_iter()
        .map(|group| {
            let mut value = Complex64::new(0.0, 0.0);
            let mut height = 0.0f64;
            for &(rho, n) in group {
                let z = rho - beta;
                let moment = if symmetric {
                    phi.symmetric_transform(z)?
                } else {
                    phi.half_line_transform(z)?
                };
                value += n as f64 * moment;
                height = height.max(rho.im.abs());
            }
            Ok((height, value))
        })
        .collect();
    let window = divisor.window();
    let truncation = window.im_max.abs().max(window.im_min.abs());
    let mut acc = ComplexKahanSum::new();
    let mut tail = 0.0;
    for c in contributions {
        let (height, value) = c?;
        acc.add(value);
        if height > 0.1 * truncation {
            tail += value.norm();
        }
    }
    if tail > tolerance {
        return Err(PairingError::TailTooLarge { tail_estimate: tail, tolerance });
    }
    Ok(PairingResult {
        value: acc.value(),
        truncation,
        tail_estimate: tail,
    })
}

/// `sum_atoms weight e^{-freq beta} phi(freq)`, plus the mirrored
/// `phi(-freq)` term (same weight) when `symmetric`.
pub fn atom_pairing(
    atoms: &AtomMeasure,
    phi: &TestFunction,
    beta: f64,
    symmetric: bool,
) -> Result<PairingResult, PairingError> {
    let (lo, hi) = phi.support();
    let needed = if symmetric { hi.max(-lo) } else { hi };
    if needed > atoms.cutoff {
        return Err(PairingError::CoverageGap {
            support_end: needed,
            cutoff: atoms.cutoff,
        });
    }
    let mut acc = ComplexKahanSum::new();
    for atom in &atoms.atoms {
        let damped = atom.weight * (-atom.frequency * beta).exp();
        let mut sample = phi.eval(atom.frequency);
        if symmetric {
            sample += phi.eval(-atom.frequency);
        }
        acc.add(damped * sample);
    }
    // a bump sees every atom in its support exactly; a gaussian leaks
    // its relative cut level past the coverage check
    let tail_estimate = match phi.kind() {
        TestFunctionKind::Bump => 0.0,
        TestFunctionKind::Gaussian => {
            let mass: f64 = atoms
                .atoms
                .iter()
                .map(|a| (a.weight * (-a.frequency * beta).exp()).norm())
                .sum();
            let copies = if symmetric { 2.0 } else { 1.0 };
            copies * mass * GAUSSIAN_SUPPORT_LEVEL
        }
    };
    Ok(PairingResult {
        value: acc.value(),
        truncation: atoms.cutoff,
        tail_estimate,
    })
}

/// `2 sum_l c_{2l} phi^{(2l)}(0)`: the delta-derivative terms sitting at
/// the origin of the symmetric formula.  `higher` lists `c_2, c_4, ...`;
/// instances in scope have none.
pub fn delta_zero_terms(c0: Complex64, phi: &TestFunction, higher: &[Complex64]) -> Complex64 {
    let mut acc = c0 * phi.derivative_at_zero(0);
    for (l, &c) in higher.iter().enumerate() {
        let order = 2 * (l as u32 + 1);
        acc += c * phi.derivative_at_zero(order);
    }
    2.0 * acc
}
