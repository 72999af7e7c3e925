//! Numerical kernels for distributional summation formulas attached to
//! finite Dirichlet series.
//!
//! The central object is [`DirichletSeries`], `f(s) = 1 + sum a_n e^{-lambda_n s}`.
//! Around it the crate provides the frequency-lattice log-expansion and its
//! atom measure ([`log_expansion`], [`atom_measure`]), divisor location in
//! vertical strips, test functions with analytically known transforms, and
//! the verification scenarios tying both sides of the summation formula
//! together.

pub mod contour;
pub mod digamma;
pub mod discrepancy;
pub mod divisor;
pub mod faddeeva;
pub mod lattice;
pub mod newton;
pub mod pairing;
pub mod primes;
pub mod quad;
pub mod report;
pub mod selberg;
pub mod series;
pub mod sum;
pub mod testfn;
pub mod verify;
pub mod zeros;
pub mod zeta;

pub use lattice::{
    atom_measure, log_expansion, AtomMeasure, FrequencyAtom, LatticeError, LogExpansion,
    LogExpansionEntry, DEFAULT_LATTICE_BUDGET,
};
pub use series::{DirichletSeries, FunctionalEquationInfo, SeriesError, FE_DETECT_TOL, MODULUS_FLOOR};
pub use sum::{kahan_sum, ComplexKahanSum, KahanSum};

pub use contour::{count_zeros, count_zeros_on, ContourError, Rectangle};
pub use digamma::{digamma, PoleError};
pub use discrepancy::{
    c0_shift, discrepancy_c0, divisor_k1, multiplicity_at, DiscrepancyConstant, DiscrepancyError,
};
pub use divisor::{locate_divisor, Divisor, DivisorError, DivisorPoint};
pub use faddeeva::faddeeva;
pub use num_complex::Complex64;
pub use newton::{
    durand_kerner, exact_power_sums_by_composition, exact_power_sums_by_recurrence,
    power_sums_from_roots, roots_with_multiplicity, s4_closed_form, square_free_parts,
    verify_newton_identities, NewtonError, ROOT_SUM_TOLERANCE,
};
pub use pairing::{atom_pairing, delta_zero_terms, divisor_pairing, PairingError, PairingResult};
pub use primes::{sieve_primes, PrimeTable};
pub use report::{params_from, VerificationReport, DEFAULT_TOLERANCE};
pub use selberg::{
    remainder_kernel, remainder_pairing, selberg_instance_check, solve_missing_length,
    SelbergData, SelbergError,
};
pub use verify::{
    explicit_formula_summary, verify_classical_poisson, verify_explicit_formula,
    verify_poisson_newton, VerifyError,
};
pub use zeros::{load_zeta_zeros, ZeroTable, ZeroTableError};
pub use zeta::{
    archimedean_side, c0_chi0, explicit_formula_check, pole_side, prime_side, psi_integral,
    w0_remainder, weil_psi, zero_side, ExplicitFormulaReport, Truncations, ZetaError,
    C0_ZETA_HALF, C0_ZETA_ZERO, EULER_GAMMA, LOG_2PI, LOG_PI,
};
pub use testfn::{TestFunction, TestFunctionError, TestFunctionKind};
