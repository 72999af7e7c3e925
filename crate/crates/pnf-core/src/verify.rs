//! Scenario orchestration: evaluates both sides of each distributional
//! identity against a concrete test function and emits one
//! [`VerificationReport`] per check.
//!
//! Scenarios covered here: the one-sided Poisson-Newton formula on the
//! positive half line, its symmetric variant on the whole line (which
//! needs the discrepancy constant c0 in front of delta_0), the classical
//! Poisson summation instance f = 1 - e^{-lambda s}, and the Riemann
//! explicit formula driven by an external zero table.
//!
//! A tolerance miss is never an error: the report comes back with
//! `pass = false` and every truncation setting recorded in `params`.
//! Errors are reserved for scenarios that cannot be evaluated at all:
//! divisor location failure, test-function support outside the computed
//! atom cutoff, unreadable zero data.

use num_complex::Complex64;
use serde_json::json;
use std::path::Path;

use crate::contour::Rectangle;
use crate::discrepancy::{discrepancy_c0, DiscrepancyConstant, DiscrepancyError};
use crate::divisor::{locate_divisor, Divisor, DivisorError, DivisorPoint};
use crate::lattice::{atom_measure, LatticeError};
use crate::pairing::{atom_pairing, delta_zero_terms, divisor_pairing, PairingError};
use crate::report::{params_from, VerificationReport};
use crate::series::DirichletSeries;
use crate::testfn::TestFunction;
use crate::zeros::{load_zeta_zeros, ZeroTableError};
use crate::zeta::{explicit_formula_check, ZetaError};
use crate::PrimeTable;

/// Node budget for fundamental-frequency enumeration in scenarios.
const ATOM_BUDGET: usize = 4_000_000;

/// Convergence exponent of a vertical zero ladder: linear counting
/// density makes sum |rho|^{-2} the first convergent power.
const LADDER_D: u32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Discrepancy(#[from] DiscrepancyError),
    #[error(transparent)]
    Zeros(#[from] ZeroTableError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("scenario rejected: {0}")]
    Validation(String),
}

fn positive_finite(value: f64, name: &str) -> Result<(), VerifyError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(VerifyError::Validation(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Checks the Poisson-Newton formula for `series`: the divisor located
/// up to height `h` paired with `phi` against the fundamental-frequency
/// atoms up to cutoff `t`, both damped by `beta`.
///
/// In symmetric mode the divisor side runs over e^{(rho-beta)|t|} and
/// the atom side gains mirrored atoms plus the delta term
/// 2 c0(beta) phi(0), with c0 computed from the located divisor by the
/// regularized discrepancy sum; no scenario assumes c0 = 0.
pub fn verify_poisson_newton(
    series: &DirichletSeries,
    phi: &TestFunction,
    h: f64,
    t: f64,
    beta: f64,
    symmetric: bool,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    positive_finite(h, "divisor height H")?;
    positive_finite(t, "atom cutoff T")?;
    positive_finite(tolerance, "tolerance")?;
    if !beta.is_finite() {
        return Err(VerifyError::Validation(format!("beta must be finite, got {beta}")));
    }

    let divisor = locate_divisor(series, h)?;
    let atoms = atom_measure(series, t, ATOM_BUDGET)?;

    // the scenario reports truncation quality instead of gating on it
    let lhs = divisor_pairing(&divisor, phi, beta, symmetric, f64::INFINITY)?;
    let rhs_atoms = atom_pairing(&atoms, phi, beta, symmetric)?;
    let mut rhs = rhs_atoms.value;

    let mut params = params_from(&[
        ("series", json!(series.to_json())),
        ("test_function", json!(phi.spec_string())),
        ("height_h", json!(h)),
        ("atom_cutoff_t", json!(t)),
        ("beta", json!(beta)),
        ("symmetric", json!(symmetric)),
        ("zero_count", json!(divisor.points().len())),
        ("atom_count", json!(atoms.atoms.len())),
        ("lhs_tail", json!(lhs.tail_estimate)),
        ("rhs_tail", json!(rhs_atoms.tail_estimate)),
    ]);

    if symmetric {
        let c0 = ladder_c0(series, &divisor, Complex64::new(beta, 0.0))?;
        rhs += delta_zero_terms(c0.c0, phi, &[]);
        params.insert("c0_re".to_string(), json!(c0.c0.re));
        params.insert("c0_im".to_string(), json!(c0.c0.im));
        params.insert("c0_tail".to_string(), json!(c0.tail_estimate));
    }

    let name = if symmetric {
        "poisson-newton-symmetric"
    } else {
        "poisson-newton"
    };
    Ok(VerificationReport::new(name, lhs.value, rhs, tolerance, params))
}

/// Discrepancy constant of `series` at origin `sigma` from an already
/// located divisor, evaluated just right of the zero strip.
fn ladder_c0(
    series: &DirichletSeries,
    divisor: &Divisor,
    sigma: Complex64,
) -> Result<DiscrepancyConstant, VerifyError> {
    let s0 = Complex64::new(series.abscissa() + 1.0, 0.0);
    Ok(discrepancy_c0(series, divisor, sigma, s0, LADDER_D, f64::INFINITY)?)
}

/// Checks classical Poisson summation as the symmetric formula for
/// f = 1 - e^{-lambda s}: the zero ladder at i 2 pi k / lambda paired
/// with `phi` against 2 c0 phi(0) + lambda sum over phi(lambda k),
/// with c0 = lambda / 2 injected in closed form.
///
/// The ladder is written down exactly (the zeros are known); `h` is the
/// ladder height and the atom cutoff follows the support of `phi`.
pub fn verify_classical_poisson(
    lambda: f64,
    phi: &TestFunction,
    h: f64,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    positive_finite(lambda, "lambda")?;
    positive_finite(h, "ladder height H")?;
    positive_finite(tolerance, "tolerance")?;

    let divisor = frequency_ladder(lambda, h)?;
    let lhs = divisor_pairing(&divisor, phi, 0.0, true, f64::INFINITY)?;

    let (lo, hi) = phi.support();
    let cutoff = hi.max(-lo).max(0.0) + lambda;
    let atoms = atom_measure(&DirichletSeries::geometric_factor(lambda), cutoff, ATOM_BUDGET)?;
    let rhs_atoms = atom_pairing(&atoms, phi, 0.0, true)?;
    let c0 = Complex64::new(0.5 * lambda, 0.0);
    let rhs = rhs_atoms.value + delta_zero_terms(c0, phi, &[]);

    let params = params_from(&[
        ("lambda", json!(lambda)),
        ("test_function", json!(phi.spec_string())),
        ("height_h", json!(h)),
        ("atom_cutoff_t", json!(cutoff)),
        ("c0", json!(0.5 * lambda)),
        ("zero_count", json!(divisor.points().len())),
        ("lhs_tail", json!(lhs.tail_estimate)),
        ("rhs_tail", json!(rhs_atoms.tail_estimate)),
    ]);
    Ok(VerificationReport::new(
        "classical-poisson",
        lhs.value,
        rhs,
        tolerance,
        params,
    ))
}

/// Exact divisor of 1 - e^{-lambda s} up to height `h`: simple zeros at
/// i 2 pi k / lambda for every integer k, including k = 0.
fn frequency_ladder(lambda: f64, h: f64) -> Result<Divisor, VerifyError> {
    let spacing = 2.0 * std::f64::consts::PI / lambda;
    let k_max = (h / spacing).floor() as i64;
    let points = (-k_max..=k_max)
        .map(|k| DivisorPoint {
            location: Complex64::new(0.0, k as f64 * spacing),
            multiplicity: 1,
        })
        .collect();
    Ok(Divisor::new(Rectangle::new(-1.0, 1.0, -h, h), points)?)
}

/// Checks the Riemann explicit formula with zeta zeros read from
/// `zeros_path` (optionally truncated to the first `max_zeros`) and
/// primes sieved up to `x`.
///
/// The report states the identity in its grouped form
/// `zero side + prime side = pole side + archimedean side` so both
/// sides keep the scale of the quantities being cancelled even when
/// the transform of `phi` is negligible at every tabulated ordinate.
pub fn verify_explicit_formula(
    phi: &TestFunction,
    zeros_path: &Path,
    x: u64,
    max_zeros: Option<usize>,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    positive_finite(tolerance, "tolerance")?;
    if x < 2 {
        return Err(VerifyError::Validation(format!(
            "prime limit X = {x} leaves the prime side empty"
        )));
    }
    let table = load_zeta_zeros(zeros_path)?;
    let table = match max_zeros {
        Some(n) => table.truncated(n),
        None => table,
    };
    let primes = crate::primes::sieve_primes(x);
    let report = explicit_formula_summary(phi, &table.gammas(), &primes, tolerance)?;
    let mut params = report.params;
    params.insert(
        "zeros_path".to_string(),
        json!(zeros_path.display().to_string()),
    );
    Ok(VerificationReport { params, ..report })
}

/// Shared assembly for explicit-formula reports: runs the check and
/// states it as zero side + prime side vs pole side + archimedean side.
pub fn explicit_formula_summary(
    phi: &TestFunction,
    gammas: &[f64],
    primes: &PrimeTable,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    let table = crate::zeros::ZeroTable::from_ordinates(gammas.to_vec());
    let ef = explicit_formula_check(phi, &table, primes)?;
    let lhs = ef.zero_side + ef.prime_side;
    let rhs = ef.pole_side + ef.archimedean_side;
    let params = params_from(&[
        ("test_function", json!(phi.spec_string())),
        ("zero_count", json!(ef.truncations.zero_count)),
        ("prime_limit", json!(ef.truncations.prime_limit)),
        (
            "quadrature_tolerance",
            json!(ef.truncations.quadrature_tolerance),
        ),
        ("zero_side_re", json!(ef.zero_side.re)),
        ("prime_side_re", json!(ef.prime_side.re)),
        ("pole_side_re", json!(ef.pole_side.re)),
        ("archimedean_side_re", json!(ef.archimedean_side.re)),
        ("residual", json!(ef.residual)),
        ("relative_residual", json!(ef.relative_residual())),
    ]);
    Ok(VerificationReport::new(
        "explicit-formula",
        lhs,
        rhs,
        tolerance,
        params,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_primes;
    use crate::zeta::prime_side;
    use std::io::Write as _;

    #[test]
    fn classical_poisson_gaussian_matches_identity() {
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        let report = verify_classical_poisson(1.0, &phi, 1.0e4, 1e-10).unwrap();
        assert!(report.pass, "rel {}", report.rel_err);
        // both sides carry the theta-function value sum_k exp(-k^2/2)
        let theta: f64 =
            1.0 + 2.0 * (1..40).map(|k: i32| (-0.5 * f64::from(k * k)).exp()).sum::<f64>();
        assert!((report.rhs.re - theta).abs() < 1e-12, "rhs {}", report.rhs.re);
    }

    #[test]
    fn classical_poisson_bump_reduces_to_delta_term() {
        // atoms at 2k sit outside supp phi, so the right side is
        // exactly 2 c0 phi(0) = 2 phi(0)
        let phi = TestFunction::bump(0.0, 0.5).unwrap();
        let report = verify_classical_poisson(2.0, &phi, 400.0, 1e-4).unwrap();
        assert!((report.rhs - Complex64::new(2.0 * phi.eval(0.0), 0.0)).norm() < 1e-15);
        assert!(report.pass, "rel {}", report.rel_err);
    }

    #[test]
    fn classical_poisson_rejects_bad_lambda() {
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        assert!(matches!(
            verify_classical_poisson(0.0, &phi, 100.0, 1e-6),
            Err(VerifyError::Validation(_))
        ));
    }

    #[test]
    fn one_sided_geometric_series_hits_the_first_atom() {
        // f = 1 - e^{-s}: atoms of weight 1 at the integers; only the
        // atom at 1 meets supp phi, so rhs = phi(1) exactly
        let series = DirichletSeries::geometric_factor(1.0);
        let phi = TestFunction::bump(1.0, 0.3).unwrap();
        let report =
            verify_poisson_newton(&series, &phi, 400.0, 2.0, 0.0, false, 1e-4).unwrap();
        assert!((report.rhs - Complex64::new(phi.eval(1.0), 0.0)).norm() < 1e-15);
        assert!(report.pass, "rel {}", report.rel_err);
    }

    #[test]
    fn beta_shift_leaves_the_verdict_unchanged() {
        let series = DirichletSeries::geometric_factor(1.0);
        let phi = TestFunction::bump(1.0, 0.3).unwrap();
        for beta in [0.0, 0.5] {
            let report =
                verify_poisson_newton(&series, &phi, 400.0, 2.0, beta, false, 1e-4).unwrap();
            assert!(report.pass, "beta {beta}: rel {}", report.rel_err);
        }
    }

    #[test]
    fn symmetric_mode_computes_c0_from_the_divisor() {
        let series = DirichletSeries::geometric_factor(1.0);
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        let report =
            verify_poisson_newton(&series, &phi, 800.0, 12.0, 0.0, true, 1e-4).unwrap();
        let c0 = report.params["c0_re"].as_f64().unwrap();
        assert!((c0 - 0.5).abs() < 1e-4, "c0 {c0}");
        assert!(report.pass, "rel {}", report.rel_err);
    }

    #[test]
    fn truncation_parameters_are_validated() {
        let series = DirichletSeries::geometric_factor(1.0);
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        assert!(matches!(
            verify_poisson_newton(&series, &phi, 0.0, 2.0, 0.0, false, 1e-6),
            Err(VerifyError::Validation(_))
        ));
        assert!(matches!(
            verify_poisson_newton(&series, &phi, 100.0, 2.0, 0.0, false, 0.0),
            Err(VerifyError::Validation(_))
        ));
    }

    #[test]
    fn prime_weights_match_the_half_shift_exactly() {
        // beta = 1/2 prime side carries (log p) p^{-k/2}; check against
        // a directly written sum over p <= 10 with every power the
        // support of phi can see
        let phi = TestFunction::gaussian(0.0, 0.8).unwrap();
        let primes = sieve_primes(10);
        let got = prime_side(&phi, &primes, 0.5).unwrap();
        let mut want = 0.0;
        for p in [2u64, 3, 5, 7] {
            let logp = (p as f64).ln();
            for k in 1..=20u32 {
                let weight = logp * (p as f64).powf(-0.5 * k as f64);
                let t = k as f64 * logp;
                want += weight * (phi.eval(t) + phi.eval(-t));
            }
        }
        assert!((got.re - want).abs() < 1e-14, "got {} want {want}", got.re);
    }

    #[test]
    fn explicit_formula_wrapper_reads_a_zero_file() {
        let bundled = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/zeta_zeros_10k.txt");
        let table = load_zeta_zeros(Path::new(bundled)).unwrap().truncated(200);
        let mut file = tempfile::NamedTempFile::new().unwrap();
        for gamma in table.gammas() {
            writeln!(file, "{gamma:.9}").unwrap();
        }
        let phi = TestFunction::gaussian(0.0, 1.0).unwrap();
        let report =
            verify_explicit_formula(&phi, file.path(), 100_000, None, 1e-3).unwrap();
        assert_eq!(report.params["zero_count"], json!(200));
        assert!(report.pass, "rel {}", report.rel_err);
        // grouped sides keep O(1) scale even though the transform is
        // negligible at every tabulated ordinate
        assert!(report.lhs.norm() > 1.0 && report.rhs.norm() > 1.0);
    }
}
