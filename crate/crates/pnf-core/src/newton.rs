//! Newton power-sum identities through the frequency-lattice route.
//!
//! A monic polynomial `P` of degree n with roots `alpha_j` embeds as the
//! finite series `f(s) = e^{-lambda n s} P(e^{lambda s})`, whose lattice
//! coefficients are the Dirichlet coefficients `a_1 .. a_n` of `P` read
//! off in descending degree.  The atom at frequency `lambda m` then
//! carries `lambda S_m` with `S_m = sum alpha_j^m`, which turns the
//! classical Newton relations into the composition identity
//!
//! `S_m = m sum_{k_1 + 2 k_2 + ... + n k_n = m} b_k`,
//! `b_k = (-1)^{|k|} |k|! / (|k| prod k_j!) prod a_j^{k_j}`.
//!
//! Both sides are polynomial in the coefficients, so integer input is
//! checked in exact rational arithmetic with the Newton recurrence as
//! the root-side oracle; floating input falls back to Durand-Kerner
//! roots.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use serde_json::json;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

use crate::report::{params_from, VerificationReport};

/// Relative agreement demanded between lattice and root power sums.
pub const ROOT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum NewtonError {
    #[error("root solve failed: {detail}")]
    RootSolveFailure { detail: String },
    #[error("invalid polynomial: {0}")]
    Validation(String),
}

// the arithmetic shared by BigRational and Complex64
trait Ring:
    Clone
    + Zero
    + One
    + PartialEq
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}
impl<T> Ring for T where
    T: Clone
        + Zero
        + One
        + PartialEq
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

// small exact integers in any ring; n stays below ~20! in practice but
// the loop is exact for any u64
fn int_of<T: Ring>(n: u64) -> T {
    let mut v = T::zero();
    for _ in 0..n {
        v = v + T::one();
    }
    v
}

fn factorial_of<T: Ring>(n: u64) -> T {
    let mut v = T::one();
    for i in 2..=n {
        v = v * int_of::<T>(i);
    }
    v
}

/// `S_m = m sum b_k` over all multi-indices with `sum j k_j = m`,
/// enumerated explicitly.  `a[j-1]` is the coefficient of `z^{n-j}`.
fn power_sums_by_composition<T: Ring>(a: &[T], m_max: usize) -> Vec<T> {
    let n = a.len();
    let mut sums = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut total = T::zero();
        // DFS over k_n, k_{n-1}, ..., k_1 with the weighted sum fixed
        let mut stack: Vec<(usize, usize, u64, T, T)> = vec![(n, m, 0, T::one(), T::one())];
        while let Some((j, remaining, norm, coeff_prod, denom)) = stack.pop() {
            if j == 0 {
                if remaining == 0 && norm >= 1 {
                    let sign = if norm % 2 == 0 { T::one() } else { -T::one() };
                    let b = sign * factorial_of::<T>(norm) / (int_of::<T>(norm) * denom)
                        * coeff_prod;
                    total = total + b;
                }
                continue;
            }
            let mut kj = 0u64;
            let mut used = 0usize;
            let mut coeff_pow = coeff_prod.clone();
            while used <= remaining {
                stack.push((
                    j - 1,
                    remaining - used,
                    norm + kj,
                    coeff_pow.clone(),
                    denom.clone() * factorial_of::<T>(kj),
                ));
                kj += 1;
                used += j;
                coeff_pow = coeff_pow * a[j - 1].clone();
            }
        }
        sums.push(int_of::<T>(m as u64) * total);
    }
    sums
}

/// The classical recurrence `S_m = e_1 S_{m-1} - e_2 S_{m-2} + ...
/// + (-1)^{m-1} m e_m`, the independent root-side oracle.
fn power_sums_by_recurrence<T: Ring>(a: &[T], m_max: usize) -> Vec<T> {
    let n = a.len();
    // elementary symmetric functions e_i = (-1)^i a_i
    let e: Vec<T> = (1..=n)
        .map(|i| {
            if i % 2 == 0 {
                a[i - 1].clone()
            } else {
                -a[i - 1].clone()
            }
        })
        .collect();
    let mut sums: Vec<T> = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut s = T::zero();
        for i in 1..m.min(n + 1) {
            let term = e[i - 1].clone() * sums[m - i - 1].clone();
            s = if i % 2 == 1 { s + term } else { s - term };
        }
        if m <= n {
            let lead = int_of::<T>(m as u64) * e[m - 1].clone();
            s = if m % 2 == 1 { s + lead } else { s - lead };
        }
        sums.push(s);
    }
    sums
}

fn dirichlet_coefficients<T: Ring>(poly: &[T]) -> Result<Vec<T>, NewtonError> {
    if poly.len() < 2 {
        return Err(NewtonError::Validation(
            "need a monic polynomial of degree at least 1".into(),
        ));
    }
    if *poly.last().unwrap() != T::one() {
        return Err(NewtonError::Validation(
            "leading coefficient must be exactly 1".into(),
        ));
    }
    // a_j multiplies z^{n-j}; the input is ascending in degree
    Ok(poly.iter().rev().skip(1).cloned().collect())
}

/// Exact `S_1 .. S_m` via the composition sum; `poly` lists rational
/// coefficients ascending in degree, monic.
pub fn exact_power_sums_by_composition(
    poly: &[BigRational],
    m_max: usize,
) -> Result<Vec<BigRational>, NewtonError> {
    Ok(power_sums_by_composition(
        &dirichlet_coefficients(poly)?,
        m_max,
    ))
}

/// Exact `S_1 .. S_m` via the Newton recurrence.
pub fn exact_power_sums_by_recurrence(
    poly: &[BigRational],
    m_max: usize,
) -> Result<Vec<BigRational>, NewtonError> {
    Ok(power_sums_by_recurrence(
        &dirichlet_coefficients(poly)?,
        m_max,
    ))
}

/// The degree-4 Newton formula
/// `S_4 = e1^4 - 4 e2 e1^2 + 4 e3 e1 + 2 e2^2 - 4 e4`.
pub fn s4_closed_form(poly: &[BigRational]) -> Result<BigRational, NewtonError> {
    let a = dirichlet_coefficients(poly)?;
    let e = |i: usize| -> BigRational {
        if i == 0 || i > a.len() {
            return if i == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
        }
        if i % 2 == 0 {
            a[i - 1].clone()
        } else {
            -a[i - 1].clone()
        }
    };
    let four = BigRational::from_i64(4).unwrap();
    let two = BigRational::from_i64(2).unwrap();
    let e1 = e(1);
    let s4 = e1.clone() * e1.clone() * e1.clone() * e1.clone()
        - four.clone() * e(2) * e1.clone() * e1.clone()
        + four.clone() * e(3) * e1
        + two * e(2) * e(2)
        - four * e(4);
    Ok(s4)
}

/// All roots of a monic polynomial (ascending coefficients) by
/// Durand-Kerner iteration.  Clusters of multiple roots spread by
/// `O(eps^{1/r})` individually but their power sums stay accurate,
/// which is all the identities need.
pub fn durand_kerner(poly: &[Complex64]) -> Result<Vec<Complex64>, NewtonError> {
    let coeffs = poly;
    if coeffs.len() < 2 {
        return Err(NewtonError::Validation(
            "need a monic polynomial of degree at least 1".into(),
        ));
    }
    if (coeffs[coeffs.len() - 1] - 1.0).norm() > 1e-12 {
        return Err(NewtonError::Validation(
            "leading coefficient must be 1".into(),
        ));
    }
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            v = v * z + c;
        }
        v
    };
    // Cauchy-style inclusion radius
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| radius * seed.powu(k as u32 + 1))
        .collect();
    let mut best_step = f64::INFINITY;
    let mut stagnant = 0;
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge apart and retry next sweep
                z[k] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(z[k]) / denom;
            z[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * radius {
            return Ok(z);
        }
        // multiple roots stall the sweep near sqrt(eps); accept once
        // the steps stop improving
        if max_step < best_step * 0.5 {
            best_step = max_step;
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant > 40 && max_step < 1e-5 * radius {
                return Ok(z);
            }
        }
    }
    // final validation through the two exactly known symmetric functions
    let sum: Complex64 = z.iter().sum();
    let prod: Complex64 = z.iter().product();
    let want_sum = -coeffs[n - 1];
    let want_prod = if n % 2 == 0 { coeffs[0] } else { -coeffs[0] };
    let scale = radius.powi(n as i32).max(1.0);
    if (sum - want_sum).norm() < 1e-8 * radius.max(1.0) && (prod - want_prod).norm() < 1e-8 * scale
    {
        return Ok(z);
    }
    Err(NewtonError::RootSolveFailure {
        detail: format!(
            "no convergence after 500 sweeps: root sum off by {:.3e}, product off by {:.3e}",
            (sum - want_sum).norm(),
            (prod - want_prod).norm()
        ),
    })
}

// exact univariate polynomial helpers over the rationals; coefficients
// ascending in degree, highest entry nonzero after trim

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_monic(p: Vec<BigRational>) -> Vec<BigRational> {
    let p = poly_trim(p);
    let lead = p.last().unwrap().clone();
    if lead.is_zero() || lead.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / lead.clone()).collect()
}

fn poly_derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    poly_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| BigRational::from_u64(i as u64).unwrap() * c)
            .collect(),
    )
}

fn poly_div_rem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = poly_trim(den.to_vec());
    let mut rem = poly_trim(num.to_vec());
    if rem.len() < den.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    let lead = den.last().unwrap().clone();
    for k in (0..quot.len()).rev() {
        let q = rem[k + den.len() - 1].clone() / lead.clone();
        if !q.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let v = rem[k + i].clone() - q.clone() * d.clone();
                rem[k + i] = v;
            }
        }
        quot[k] = q;
    }
    (poly_trim(quot), poly_trim(rem))
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !poly_is_zero(&y) {
        let (_, r) = poly_div_rem(&x, &y);
        x = y;
        y = r;
    }
    poly_monic(x)
}

/// Yun square-free decomposition: returns `(factor, multiplicity)`
/// pairs with each factor monic and square-free, so that the input is
/// the product of `factor^multiplicity`.
pub fn square_free_parts(
    poly: &[BigRational],
) -> Result<Vec<(Vec<BigRational>, u32)>, NewtonError> {
    let f = poly_trim(poly.to_vec());
    if f.len() < 2 {
        return Err(NewtonError::Validation(
            "need a polynomial of degree at least 1".into(),
        ));
    }
    let f = poly_monic(f);
    let df = poly_derivative(&f);
    let g = poly_gcd(&f, &df);
    let mut parts = Vec::new();
    if g.len() == 1 {
        parts.push((f, 1));
        return Ok(parts);
    }
    let (mut w, r) = poly_div_rem(&f, &g);
    debug_assert!(poly_is_zero(&r));
    let (mut y, r) = poly_div_rem(&df, &g);
    debug_assert!(poly_is_zero(&r));
    let mut i = 1u32;
    while w.len() > 1 {
        // z = y - w'; its common part with w is the multiplicity-i factor
        let dw = poly_derivative(&w);
        let mut z: Vec<BigRational> = vec![BigRational::zero(); y.len().max(dw.len())];
        for (k, c) in y.iter().enumerate() {
            z[k] = z[k].clone() + c.clone();
        }
        for (k, c) in dw.iter().enumerate() {
            z[k] = z[k].clone() - c.clone();
        }
        let z = poly_trim(z);
        let a = poly_gcd(&w, &z);
        if a.len() > 1 {
            parts.push((a.clone(), i));
        }
        let (w2, r) = poly_div_rem(&w, &a);
        debug_assert!(poly_is_zero(&r));
        let (y2, r) = poly_div_rem(&z, &a);
        debug_assert!(poly_is_zero(&r));
        w = w2;
        y = y2;
        i += 1;
    }
    Ok(parts)
}

/// Roots of an exact rational polynomial with true multiplicities:
/// the square-free split leaves Durand-Kerner only simple roots, where
/// it is eps-accurate, so repeated roots cost no precision.
pub fn roots_with_multiplicity(
    poly: &[BigRational],
) -> Result<Vec<(Complex64, u32)>, NewtonError> {
    let mut out = Vec::new();
    for (factor, mult) in square_free_parts(poly)? {
        let coeffs: Vec<Complex64> = factor
            .iter()
            .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        for root in durand_kerner(&coeffs)? {
            out.push((root, mult));
        }
    }
    Ok(out)
}

/// `S_m = sum_j roots[j]^m` for `m = 1 ..= m_max`.
pub fn power_sums_from_roots(roots: &[Complex64], m_max: usize) -> Vec<Complex64> {
    let mut powers: Vec<Complex64> = roots.to_vec();
    let mut sums = Vec::with_capacity(m_max);
    for _ in 1..=m_max {
        sums.push(powers.iter().sum());
        for (p, r) in powers.iter_mut().zip(roots) {
            *p *= r;
        }
    }
    sums
}

fn integral_parts(poly: &[Complex64]) -> Option<Vec<BigRational>> {
    poly.iter()
        .map(|c| {
            if c.im == 0.0 && c.re == c.re.round() && c.re.abs() < 9.0e15 {
                BigRational::from_i64(c.re as i64)
            } else {
                None
            }
        })
        .collect()
}

/// One report per `m`: the lattice composition sum against the
/// root-side power sum.  Integer coefficients run entirely in rational
/// arithmetic (the recurrence standing in for the roots), everything
/// else solves for roots with Durand-Kerner.
pub fn verify_newton_identities(
    poly_coeffs: &[Complex64],
    lambda: f64,
    m_max: usize,
) -> Result<Vec<VerificationReport>, NewtonError> {
    if m_max == 0 {
        return Err(NewtonError::Validation("m_max must be at least 1".into()));
    }
    if !(lambda > 0.0) {
        return Err(NewtonError::Validation(format!(
            "base frequency must be positive, got {lambda}"
        )));
    }
    let degree = poly_coeffs.len().saturating_sub(1);
    let common = |m: usize, method: &str| {
        params_from(&[
            ("degree", json!(degree)),
            ("lambda", json!(lambda)),
            ("m", json!(m)),
            ("m_max", json!(m_max)),
            ("method", json!(method)),
        ])
    };
    if let Some(exact) = integral_parts(poly_coeffs) {
        let comp = exact_power_sums_by_composition(&exact, m_max)?;
        let rec = exact_power_sums_by_recurrence(&exact, m_max)?;
        return Ok(comp
            .iter()
            .zip(&rec)
            .enumerate()
            .map(|(i, (c, r))| {
                let lhs = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
                let rhs = Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
                let mut report = VerificationReport::new(
                    format!("newton-identity:m={}", i + 1),
                    lhs,
                    rhs,
                    ROOT_SUM_TOLERANCE,
                    common(i + 1, "exact-rational"),
                );
                // exact disagreement must fail even when both round to
                // the same float
                if c != r {
                    report.pass = false;
                    report.rel_err = report.rel_err.max(f64::MIN_POSITIVE);
                }
                report
            })
            .collect());
    }
    let a = dirichlet_coefficients(poly_coeffs)?;
    let comp = power_sums_by_composition(&a, m_max);
    let roots = durand_kerner(poly_coeffs)?;
    let from_roots = power_sums_from_roots(&roots, m_max);
    Ok(comp
        .iter()
        .zip(&from_roots)
        .enumerate()
        .map(|(i, (c, r))| {
            VerificationReport::new(
                format!("newton-identity:m={}", i + 1),
                *c,
                *r,
                ROOT_SUM_TOLERANCE,
                common(i + 1, "durand-kerner"),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn rat_poly(coeffs: &[i64]) -> Vec<BigRational> {
        coeffs.iter().map(|&c| rat(c)).collect()
    }

    #[test]
    fn two_root_example_gives_known_sums() {
        // P(z) = z^2 - 3z + 2, roots 1 and 2
        let poly = rat_poly(&[2, -3, 1]);
        let comp = exact_power_sums_by_composition(&poly, 4).unwrap();
        assert_eq!(comp, vec![rat(3), rat(5), rat(9), rat(17)]);
        let rec = exact_power_sums_by_recurrence(&poly, 4).unwrap();
        assert_eq!(rec, comp);
    }

    #[test]
    fn single_root_one_gives_constant_sums() {
        let poly = rat_poly(&[-1, 1]);
        let comp = exact_power_sums_by_composition(&poly, 9).unwrap();
        assert!(comp.iter().all(|s| *s == rat(1)));
    }

    #[test]
    fn composition_matches_recurrence_exactly_for_random_polys() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for _ in 0..30 {
            let degree = rng.gen_range(1..=8);
            let mut poly: Vec<BigRational> =
                (0..degree).map(|_| rat(rng.gen_range(-9..=9))).collect();
            poly.push(rat(1));
            let comp = exact_power_sums_by_composition(&poly, 10).unwrap();
            let rec = exact_power_sums_by_recurrence(&poly, 10).unwrap();
            assert_eq!(comp, rec, "poly {poly:?}");
        }
    }

    #[test]
    fn quartic_closed_form_matches_composition() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for _ in 0..20 {
            let mut poly: Vec<BigRational> = (0..4).map(|_| rat(rng.gen_range(-9..=9))).collect();
            poly.push(rat(1));
            let s4 = s4_closed_form(&poly).unwrap();
            let comp = exact_power_sums_by_composition(&poly, 4).unwrap();
            assert_eq!(s4, comp[3], "poly {poly:?}");
        }
    }

    #[test]
    fn square_free_split_recovers_multiplicities() {
        // (z^2 + 1)^2 (z - 3)^3
        let squared = rat_poly(&[1, 0, 1]);
        let cubed = rat_poly(&[-3, 1]);
        let mut poly = vec![rat(1)];
        for factor in [&squared, &squared, &cubed, &cubed, &cubed] {
            let mut next = vec![rat(0); poly.len() + factor.len() - 1];
            for (i, p) in poly.iter().enumerate() {
                for (j, q) in factor.iter().enumerate() {
                    let v = next[i + j].clone() + p.clone() * q.clone();
                    next[i + j] = v;
                }
            }
            poly = next;
        }
        let parts = square_free_parts(&poly).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (rat_poly(&[1, 0, 1]), 2));
        assert_eq!(parts[1], (rat_poly(&[-3, 1]), 3));
        // pure power: z^4
        let parts = square_free_parts(&rat_poly(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(parts, vec![(rat_poly(&[0, 1]), 4)]);
    }

    #[test]
    fn repeated_roots_keep_power_sums_accurate() {
        // (z - 1)^2 (z + 2) = z^3 - 3z + 2; raw iteration would stall
        // near sqrt(eps) on the double root
        let poly = rat_poly(&[2, -3, 0, 1]);
        let weighted = roots_with_multiplicity(&poly).unwrap();
        let flat: Vec<Complex64> = weighted
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat(z).take(m as usize))
            .collect();
        assert_eq!(flat.len(), 3);
        let sums = power_sums_from_roots(&flat, 16);
        let exact = exact_power_sums_by_recurrence(&poly, 16).unwrap();
        for (s, e) in sums.iter().zip(&exact) {
            let want = e.to_f64().unwrap();
            let rel = (s - want).norm() / want.abs().max(1.0);
            assert!(rel < 1e-12, "{s} vs {want}");
        }
    }

    #[test]
    fn float_roots_match_float_recurrence() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..20 {
            let degree = rng.gen_range(1..=6);
            let mut poly: Vec<Complex64> = (0..degree)
                .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                .collect();
            poly.push(Complex64::new(1.0, 0.0));
            let a = dirichlet_coefficients(&poly).unwrap();
            let rec = power_sums_by_recurrence(&a, 8);
            let sums = power_sums_from_roots(&durand_kerner(&poly).unwrap(), 8);
            for (s, r) in sums.iter().zip(&rec) {
                let rel = (s - r).norm() / r.norm().max(1.0);
                assert!(rel < 1e-9, "poly {poly:?}: {s} vs {r}");
            }
        }
    }

    #[test]
    fn integer_reports_are_exactly_zero_error() {
        let poly = [
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let reports = verify_newton_identities(&poly, 1.0, 8).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert_eq!(r.abs_err, 0.0, "{}", r.scenario);
            assert!(r.pass);
            assert_eq!(r.params["method"], json!("exact-rational"));
        }
        assert_eq!(reports[3].lhs.re, 17.0);
    }

    #[test]
    fn fractional_coefficients_take_the_root_path() {
        let poly = [
            Complex64::new(1.125, 0.0),
            Complex64::new(-2.5, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let reports = verify_newton_identities(&poly, 2.0, 6).unwrap();
        for r in &reports {
            assert!(r.pass, "{}: rel {}", r.scenario, r.rel_err);
            assert_eq!(r.params["method"], json!("durand-kerner"));
        }
    }

    #[test]
    fn lattice_atoms_carry_lambda_times_power_sums() {
        // f(s) = 1 - 3 e^{-lambda s} + 2 e^{-2 lambda s} embeds
        // P(z) = z^2 - 3z + 2; atom weight at lambda m is lambda S_m
        let lambda = 0.7;
        let series = crate::series::DirichletSeries::new(
            vec![lambda, 2.0 * lambda],
            vec![Complex64::new(-3.0, 0.0), Complex64::new(2.0, 0.0)],
            Some(lambda),
            Some(vec![1, 2]),
        )
        .unwrap();
        let atoms = crate::lattice::atom_measure(&series, 6.0 * lambda + 0.01, 1_000_000).unwrap();
        let exact = exact_power_sums_by_recurrence(&rat_poly(&[2, -3, 1]), 6).unwrap();
        for (m, s) in exact.iter().enumerate() {
            let freq = lambda * (m + 1) as f64;
            let atom = atoms
                .atoms
                .iter()
                .find(|a| (a.frequency - freq).abs() < 1e-9)
                .unwrap();
            let want = lambda * s.to_f64().unwrap();
            assert!(
                (atom.weight.re - want).abs() < 1e-10 * want.abs().max(1.0),
                "m={} weight {} vs {}",
                m + 1,
                atom.weight,
                want
            );
            assert!(atom.weight.im.abs() < 1e-12);
        }
    }
}
