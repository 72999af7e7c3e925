//! Finite Dirichlet series `f(s) = 1 + sum_n a_n exp(-lambda_n s)`.
//!
//! The leading coefficient is always 1 and the frequencies `lambda_n` are
//! strictly increasing positive reals.  Everything downstream (zero
//! location, log-expansion atoms, pairing checks) consumes this type, so
//! construction validates eagerly and evaluation is deterministic:
//! ascending frequency order with compensated accumulation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sum::{ComplexKahanSum, KahanSum};

/// Modulus floor for logarithmic derivatives, relative to the term-size
/// scale at the evaluation point.  Below it we are too close to a zero for
/// f'/f to mean anything in f64.
pub const MODULUS_FLOOR: f64 = 1e-12;

/// Relative tolerance for functional-equation symmetry detection.
pub const FE_DETECT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("invalid series: field `{field}`: {message}")]
    Validation { field: &'static str, message: String },
    #[error("series file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("|f({at})| = {modulus:.3e} is below the floor {floor:.3e}; evaluation point is too close to a divisor point")]
    NearZeroDenominator { at: Complex64, modulus: f64, floor: f64 },
}

/// Serialized form: coefficients are `[re, im]` pairs so the files stay
/// language neutral.
#[derive(Debug, Serialize, Deserialize)]
struct SeriesFile {
    frequencies: Vec<f64>,
    coefficients: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rational_base: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multipliers: Option<Vec<u64>>,
}

/// A finite Dirichlet series with unit leading term.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletSeries {
    frequencies: Vec<f64>,
    coefficients: Vec<Complex64>,
    /// When present, every frequency is an integer multiple of this base;
    /// the multiplier of `frequencies[n]` is `multipliers[n]`.
    rational_base: Option<f64>,
    multipliers: Option<Vec<u64>>,
}

/// Outcome of the self-duality test: does the completed frequency list
/// `(0, lambda_1, .., lambda_N)` sit symmetrically about `mu = lambda_N/2`
/// with mirrored coefficients?
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalEquationInfo {
    pub has_fe: bool,
    pub mu: Option<f64>,
    /// Sign of the equation, `+1` or `-1`; forced to `+1` when the stored
    /// coefficient count is even (the middle coefficient pairs with itself).
    pub c: Option<f64>,
    pub axis_note: String,
}

impl DirichletSeries {
    /// Validates and builds a series.  Zero coefficients are dropped (with
    /// their frequencies) rather than stored.
    pub fn new(
        frequencies: Vec<f64>,
        coefficients: Vec<Complex64>,
        rational_base: Option<f64>,
        multipliers: Option<Vec<u64>>,
    ) -> Result<Self, SeriesError> {
        if frequencies.len() != coefficients.len() {
            return Err(SeriesError::Validation {
                field: "coefficients",
                message: format!(
                    "length {} does not match {} frequencies",
                    coefficients.len(),
                    frequencies.len()
                ),
            });
        }
        if frequencies.is_empty() {
            return Err(SeriesError::Validation {
                field: "frequencies",
                message: "series must have at least one frequency".into(),
            });
        }
        if let Some(m) = &multipliers {
            if rational_base.is_none() {
                return Err(SeriesError::Validation {
                    field: "multipliers",
                    message: "multipliers given without rational_base".into(),
                });
            }
            if m.len() != frequencies.len() {
                return Err(SeriesError::Validation {
                    field: "multipliers",
                    message: format!("length {} does not match {} frequencies", m.len(), frequencies.len()),
                });
            }
        }
        // drop zero coefficients before the ordering checks
        let mut freq = Vec::with_capacity(frequencies.len());
        let mut coef = Vec::with_capacity(coefficients.len());
        let mut mult = multipliers.as_ref().map(|_| Vec::new());
        for (i, (&l, &a)) in frequencies.iter().zip(&coefficients).enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !l.is_finite() || l <= 0.0 {
                return Err(SeriesError::Validation {
                    field: "frequencies",
                    message: format!("frequency #{i} = {l} is not a positive finite real"),
                });
            }
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(SeriesError::Validation {
                    field: "coefficients",
                    message: format!("coefficient #{i} is not finite"),
                });
            }
            freq.push(l);
            coef.push(a);
            if let (Some(mv), Some(src)) = (mult.as_mut(), multipliers.as_ref()) {
                mv.push(src[i]);
            }
        }
        if freq.is_empty() {
            return Err(SeriesError::Validation {
                field: "coefficients",
                message: "all coefficients are zero".into(),
            });
        }
        for w in freq.windows(2) {
            if w[1] <= w[0] {
                return Err(SeriesError::Validation {
                    field: "frequencies",
                    message: format!("frequencies must be strictly increasing, found {} after {}", w[1], w[0]),
                });
            }
        }
        if let Some(base) = rational_base {
            if !base.is_finite() || base <= 0.0 {
                return Err(SeriesError::Validation {
                    field: "rational_base",
                    message: format!("base {base} is not a positive finite real"),
                });
            }
            let mult = match mult {
                Some(m) => m,
                // derive multipliers by rounding when the file omits them
                None => freq.iter().map(|&l| (l / base).round() as u64).collect(),
            };
            for (i, (&l, &m)) in freq.iter().zip(&mult).enumerate() {
                if m == 0 || (l - base * m as f64).abs() > 1e-12 * l.max(1.0) {
                    return Err(SeriesError::Validation {
                        field: "rational_base",
                        message: format!(
                            "frequency #{i} = {l} is not an integer multiple of base {base} (multiplier {m})"
                        ),
                    });
                }
            }
            return Ok(Self {
                frequencies: freq,
                coefficients: coef,
                rational_base: Some(base),
                multipliers: Some(mult),
            });
        }
        Ok(Self {
            frequencies: freq,
            coefficients: coef,
            rational_base: None,
            multipliers: None,
        })
    }

    /// Convenience constructor for the one-frequency family `1 - exp(-lambda s)`.
    pub fn geometric_factor(lambda: f64) -> Self {
        Self::new(
            vec![lambda],
            vec![Complex64::new(-1.0, 0.0)],
            Some(lambda),
            Some(vec![1]),
        )
        .expect("geometric factor is always valid")
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        let raw: SeriesFile = serde_json::from_str(text)?;
        let coefficients = raw.coefficients.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        Self::new(raw.frequencies, coefficients, raw.rational_base, raw.multipliers)
    }

    pub fn to_json(&self) -> String {
        let raw = SeriesFile {
            frequencies: self.frequencies.clone(),
            coefficients: self.coefficients.iter().map(|c| [c.re, c.im]).collect(),
            rational_base: self.rational_base,
            multipliers: self.multipliers.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("series serialization cannot fail")
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn rational_base(&self) -> Option<f64> {
        self.rational_base
    }

    pub fn multipliers(&self) -> Option<&[u64]> {
        self.multipliers.as_deref()
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f(s)`, summed in ascending frequency order with compensation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = ComplexKahanSum::new();
        acc.add(Complex64::new(1.0, 0.0));
        for (&l, &a) in self.frequencies.iter().zip(&self.coefficients) {
            acc.add(a * (-l * s).exp());
        }
        acc.value()
    }

    /// `f'(s)`.
    pub fn eval_derivative(&self, s: Complex64) -> Complex64 {
        let mut acc = ComplexKahanSum::new();
        for (&l, &a) in self.frequencies.iter().zip(&self.coefficients) {
            acc.add(a * (-l) * (-l * s).exp());
        }
        acc.value()
    }

    /// Size scale `1 + sum |a_n| exp(-lambda_n Re s)` of the terms at `s`;
    /// residual and floor checks are relative to this.
    pub fn term_scale(&self, s: Complex64) -> f64 {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for (&l, &a) in self.frequencies.iter().zip(&self.coefficients) {
            acc.add(a.norm() * (-l * s.re).exp());
        }
        acc.value()
    }

    /// `f'(s)/f(s)`; errors when `|f(s)|` is below the modulus floor.
    pub fn log_derivative(&self, s: Complex64) -> Result<Complex64, SeriesError> {
        let f = self.eval(s);
        let floor = MODULUS_FLOOR * self.term_scale(s);
        if f.norm() < floor {
            return Err(SeriesError::NearZeroDenominator {
                at: s,
                modulus: f.norm(),
                floor,
            });
        }
        Ok(self.eval_derivative(s) / f)
    }

    /// Right edge of the zero region: `max_n log(S_n)/lambda_n` with
    /// `S_n = |a_1| + .. + |a_n|`.  Zeros can reach this line but, with a
    /// series-dependent margin, not pass it.
    pub fn abscissa(&self) -> f64 {
        let mut partial = 0.0f64;
        let mut best = f64::NEG_INFINITY;
        for (&l, &a) in self.frequencies.iter().zip(&self.coefficients) {
            partial += a.norm();
            best = best.max(partial.ln() / l);
        }
        best
    }

    /// All coefficients real?
    pub fn is_real_analytic(&self) -> bool {
        self.coefficients.iter().all(|a| a.im == 0.0)
    }

    /// Series with conjugated coefficients; used by symmetry tests.
    pub fn conjugate(&self) -> Self {
        Self {
            frequencies: self.frequencies.clone(),
            coefficients: self.coefficients.iter().map(|a| a.conj()).collect(),
            rational_base: self.rational_base,
            multipliers: self.multipliers.clone(),
        }
    }

    /// Tests whether the completed frequency list is symmetric about
    /// `mu = lambda_N / 2` with coefficients mirrored up to a sign.
    pub fn detect_functional_equation(&self) -> FunctionalEquationInfo {
        let n = self.frequencies.len();
        let lam_n = self.frequencies[n - 1];
        let mu = lam_n / 2.0;
        let ftol = FE_DETECT_TOL * lam_n.max(1.0);
        // completed lists: frequency 0 with coefficient 1 in front
        let nu = |i: usize| if i == 0 { 0.0 } else { self.frequencies[i - 1] };
        let co = |i: usize| {
            if i == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                self.coefficients[i - 1]
            }
        };
        for i in 0..=n {
            if (nu(i) + nu(n - i) - 2.0 * mu).abs() > ftol {
                return FunctionalEquationInfo {
                    has_fe: false,
                    mu: None,
                    c: None,
                    axis_note: format!("frequency list is not symmetric about {mu}"),
                };
            }
        }
        // the sign is pinned by the outermost pair a_N = c * a_0 = c
        let c_candidate = co(n);
        let sign = if (c_candidate - Complex64::new(1.0, 0.0)).norm() <= FE_DETECT_TOL {
            1.0
        } else if (c_candidate + Complex64::new(1.0, 0.0)).norm() <= FE_DETECT_TOL {
            -1.0
        } else {
            return FunctionalEquationInfo {
                has_fe: false,
                mu: None,
                c: None,
                axis_note: "outermost coefficient is not +1 or -1".into(),
            };
        };
        if n % 2 == 0 && sign < 0.0 {
            // even count: the middle coefficient pairs with itself, forcing c = +1
            return FunctionalEquationInfo {
                has_fe: false,
                mu: None,
                c: None,
                axis_note: "sign -1 impossible with an even coefficient count".into(),
            };
        }
        for i in 0..=n {
            let want = co(i) * sign;
            let got = co(n - i);
            if (got - want).norm() > FE_DETECT_TOL * co(i).norm().max(1.0) {
                return FunctionalEquationInfo {
                    has_fe: false,
                    mu: None,
                    c: None,
                    axis_note: format!("coefficient pair {i}/{} breaks the mirror symmetry", n - i),
                };
            }
        }
        FunctionalEquationInfo {
            has_fe: true,
            mu: Some(mu),
            c: Some(sign),
            axis_note: format!(
                "exp({mu}s) f(s) is invariant under s -> -s up to sign {sign}; zero set symmetric about Re s = 0 after the shift"
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simple(freqs: &[f64], coefs: &[f64]) -> DirichletSeries {
        DirichletSeries::new(
            freqs.to_vec(),
            coefs.iter().map(|&x| c(x, 0.0)).collect(),
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn eval_two_frequency_example() {
        // 1 + 0.5 e^{-s} + 0.25 e^{-sqrt2 s} at s = 0 is 1.75
        let f = simple(&[1.0, std::f64::consts::SQRT_2], &[0.5, 0.25]);
        let v = f.eval(c(0.0, 0.0));
        assert!((v - c(1.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn log_derivative_of_geometric_factor() {
        // f = 1 - e^{-s}: f'/f = 1/(e^s - 1); at s = 1 that is 1/(e-1).
        let f = DirichletSeries::geometric_factor(1.0);
        let v = f.log_derivative(c(1.0, 0.0)).unwrap();
        let expect = 1.0 / (std::f64::consts::E - 1.0);
        assert!((v - c(expect, 0.0)).norm() < 1e-14);
        assert!((expect - 0.5819767068693265).abs() < 1e-15);
    }

    #[test]
    fn log_derivative_rejects_divisor_points() {
        // s = 2 pi i is a zero of 1 - e^{-s}
        let f = DirichletSeries::geometric_factor(1.0);
        let err = f.log_derivative(c(0.0, 2.0 * std::f64::consts::PI));
        assert!(matches!(err, Err(SeriesError::NearZeroDenominator { .. })));
    }

    #[test]
    fn abscissa_examples() {
        let f = simple(&[1.0], &[3.0]);
        assert!((f.abscissa() - 3.0f64.ln()).abs() < 1e-15);
        let g = simple(&[1.0, 2.0], &[1.0, 1.0]);
        assert!((g.abscissa() - 2.0f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn validation_names_offending_field() {
        let err = DirichletSeries::new(vec![2.0, 1.0], vec![c(1.0, 0.0), c(1.0, 0.0)], None, None);
        match err {
            Err(SeriesError::Validation { field, .. }) => assert_eq!(field, "frequencies"),
            other => panic!("expected validation error, got {other:?}"),
        }
        let err = DirichletSeries::new(vec![1.0], vec![], None, None);
        assert!(matches!(err, Err(SeriesError::Validation { field: "coefficients", .. })));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let f = DirichletSeries::new(
            vec![1.0, 2.0, 3.0],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
            None,
            None,
        )
        .unwrap();
        assert_eq!(f.frequencies(), &[1.0, 3.0]);
    }

    #[test]
    fn json_round_trip_and_field_errors() {
        let f = simple(&[1.0, 2.0], &[3.0, 1.0]);
        let g = DirichletSeries::from_json(&f.to_json()).unwrap();
        assert_eq!(f, g);
        let bad = r#"{"frequencies": [1.0, 2.0], "coefficients": [[1.0, 0.0]]}"#;
        match DirichletSeries::from_json(bad) {
            Err(SeriesError::Validation { field, .. }) => assert_eq!(field, "coefficients"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rational_base_validation() {
        let ok = DirichletSeries::new(
            vec![0.5, 1.5],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            Some(0.5),
            None,
        )
        .unwrap();
        assert_eq!(ok.multipliers(), Some(&[1u64, 3u64][..]));
        let bad = DirichletSeries::new(
            vec![0.5, 1.2],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            Some(0.5),
            None,
        );
        assert!(matches!(bad, Err(SeriesError::Validation { field: "rational_base", .. })));
    }

    #[test]
    fn detects_palindromic_functional_equation() {
        // 1 + 3 e^{-s} + e^{-2s}: completed list (0,1,2), mirrored about 1
        let f = simple(&[1.0, 2.0], &[3.0, 1.0]);
        let info = f.detect_functional_equation();
        assert!(info.has_fe);
        assert_eq!(info.mu, Some(1.0));
        assert_eq!(info.c, Some(1.0));
    }

    #[test]
    fn detects_negative_sign_equation() {
        // 1 - e^{-2s} = e^{-s} (e^{s} - e^{-s}): sign -1, mu = 1
        let f = simple(&[2.0], &[-1.0]);
        let info = f.detect_functional_equation();
        assert!(info.has_fe);
        assert_eq!(info.mu, Some(1.0));
        assert_eq!(info.c, Some(-1.0));
    }

    #[test]
    fn rejects_asymmetric_frequency_list() {
        let f = simple(&[1.0, 2.5], &[1.0, 1.0]);
        let info = f.detect_functional_equation();
        assert!(!info.has_fe);
        assert!(info.mu.is_none());
    }

    #[test]
    fn real_analytic_flag() {
        let f = simple(&[1.0], &[2.0]);
        assert!(f.is_real_analytic());
        let g = DirichletSeries::new(vec![1.0], vec![c(1.0, 0.5)], None, None).unwrap();
        assert!(!g.is_real_analytic());
        assert!(g.conjugate().is_real_analytic() == false);
        assert_eq!(g.conjugate().coefficients()[0], c(1.0, -0.5));
    }
}
