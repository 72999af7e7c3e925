//! Log-expansion of a finite Dirichlet series over its frequency lattice.
//!
//! Writing `f = 1 + g`, the series `-log f = -sum_m (-1)^{m+1} g^m / m`
//! expands into terms indexed by multi-indices `k` over the frequencies:
//!
//! ```text
//! -log f(s) = sum_k b_k exp(-<lambda, k> s),
//! b_k = ((-1)^{|k|} / |k|) * (|k|! / prod_j k_j!) * prod_j a_j^{k_j}
//! ```
//!
//! with `|k| = k_1 + .. + k_N >= 1`.  The expansion is purely
//! combinatorial, so no branch of the complex logarithm is ever chosen.
//! Differentiating term by term yields the atom measure: a point mass of
//! weight `<lambda, k> b_k` at position `<lambda, k>`, merged over
//! colliding multi-indices.

use num_complex::Complex64;
use thiserror::Error;

use crate::series::DirichletSeries;
use crate::sum::ComplexKahanSum;

/// Default ceiling on the number of lattice entries enumerated.
pub const DEFAULT_LATTICE_BUDGET: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice enumeration exceeded its budget of {budget} entries below cutoff {cutoff}; narrow the cutoff or raise the budget")]
    ExplosionGuard { budget: usize, cutoff: f64 },
}

/// One term of the log-expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct LogExpansionEntry {
    /// Sparse multi-index: (frequency position, power), positions ascending.
    pub indices: Vec<(usize, u32)>,
    /// `|k|`, the total order.
    pub order: u32,
    /// `<lambda, k>`.
    pub frequency: f64,
    /// The coefficient `b_k`.
    pub b: Complex64,
}

/// All log-expansion terms with `<lambda, k> <= cutoff`.
#[derive(Debug, Clone)]
pub struct LogExpansion {
    pub entries: Vec<LogExpansionEntry>,
    pub cutoff: f64,
}

/// A merged point mass of the derivative measure.
#[derive(Debug, Clone)]
pub struct FrequencyAtom {
    pub frequency: f64,
    /// Sum of `<lambda, k> b_k` over all multi-indices landing here.
    pub weight: Complex64,
    /// Number of multi-indices merged into this atom.
    pub contributing: usize,
}

/// The atom side of the summation formula, truncated at `cutoff`.
#[derive(Debug, Clone)]
pub struct AtomMeasure {
    pub atoms: Vec<FrequencyAtom>,
    pub cutoff: f64,
}

/// Natural log of n! ; exact table route below 171, Stirling above.
fn ln_factorial(n: u64) -> f64 {
    if n < 171 {
        return factorial_f64(n).ln();
    }
    let x = (n + 1) as f64;
    // Stirling series for ln Gamma(x)
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

fn factorial_f64(n: u64) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=n {
        acc *= i as f64;
    }
    acc
}

/// `|k|! / prod k_j!` as f64; switches to the log route when the direct
/// factorials would overflow.
fn multinomial(order: u32, powers: &[(usize, u32)]) -> f64 {
    if order < 171 {
        let mut denom = 1.0f64;
        for &(_, k) in powers {
            denom *= factorial_f64(k as u64);
        }
        factorial_f64(order as u64) / denom
    } else {
        let mut ln = ln_factorial(order as u64);
        for &(_, k) in powers {
            ln -= ln_factorial(k as u64);
        }
        ln.exp()
    }
}

/// Recomputes `b_k` for a multi-index straight from the defining formula.
/// `LogExpansion` entries are produced by this same routine, so stored
/// values are reproducible bit for bit from their multi-index.
pub fn coefficient_for(series: &DirichletSeries, indices: &[(usize, u32)]) -> Complex64 {
    let order: u32 = indices.iter().map(|&(_, k)| k).sum();
    debug_assert!(order >= 1);
    let mut prod = Complex64::new(1.0, 0.0);
    for &(j, k) in indices {
        prod *= series.coefficients()[j].powu(k);
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    prod * (sign * multinomial(order, indices) / order as f64)
}

/// Enumerates every multi-index with `<lambda, k> <= cutoff` by bounded
/// depth-first search over the frequencies in descending order.
pub fn log_expansion(
    series: &DirichletSeries,
    cutoff: f64,
    budget: usize,
) -> Result<LogExpansion, LatticeError> {
    let freqs = series.frequencies();
    let mut entries = Vec::new();
    let mut stack: Vec<(usize, u32)> = Vec::new();

    // depth-first over positions N-1, N-2, .., 0; `remaining` is the
    // frequency budget left once the powers on the stack are paid for.
    // A node is emitted right after its power is pushed, so every
    // multi-index appears exactly once, at its lowest nonzero position.
    fn descend(
        series: &DirichletSeries,
        freqs: &[f64],
        pos: usize,
        remaining: f64,
        stack: &mut Vec<(usize, u32)>,
        entries: &mut Vec<LogExpansionEntry>,
        budget: usize,
        cutoff: f64,
    ) -> Result<(), LatticeError> {
        let lam = freqs[pos];
        let max_k = ((remaining / lam).floor() as i64).max(0) as u32;
        for k in 0..=max_k {
            if k > 0 {
                stack.push((pos, k));
                if entries.len() >= budget {
                    stack.pop();
                    return Err(LatticeError::ExplosionGuard { budget, cutoff });
                }
                let mut indices: Vec<(usize, u32)> = stack.clone();
                indices.sort_by_key(|&(j, _)| j);
                let order: u32 = indices.iter().map(|&(_, kk)| kk).sum();
                let frequency: f64 = indices.iter().map(|&(j, kk)| freqs[j] * kk as f64).sum();
                let b = coefficient_for(series, &indices);
                entries.push(LogExpansionEntry { indices, order, frequency, b });
            }
            if pos > 0 {
                let rest = remaining - lam * k as f64;
                descend(series, freqs, pos - 1, rest, stack, entries, budget, cutoff)?;
            }
            if k > 0 {
                stack.pop();
            }
        }
        Ok(())
    }

    if cutoff >= freqs[0] {
        descend(series, freqs, freqs.len() - 1, cutoff, &mut stack, &mut entries, budget, cutoff)?;
    }
    entries.sort_by(|a, b| {
        a.frequency
            .partial_cmp(&b.frequency)
            .unwrap()
            .then(a.indices.cmp(&b.indices))
    });
    Ok(LogExpansion { entries, cutoff })
}

/// Derivative measure of the log-expansion: atoms at `<lambda, k>` with
/// weight `<lambda, k> b_k`, merged over collisions.
///
/// With a rational base the merge key is the exact integer multiplier, so
/// lattice collisions are resolved without any epsilon.  Otherwise atoms
/// closer than `1e-12 * max(1, frequency)` are merged.
pub fn atom_measure(
    series: &DirichletSeries,
    cutoff: f64,
    budget: usize,
) -> Result<AtomMeasure, LatticeError> {
    let expansion = log_expansion(series, cutoff, budget)?;
    let mut atoms: Vec<FrequencyAtom> = Vec::new();
    if let (Some(base), Some(mult)) = (series.rational_base(), series.multipliers()) {
        use std::collections::BTreeMap;
        let mut merged: BTreeMap<u64, (ComplexKahanSum, usize)> = BTreeMap::new();
        for e in &expansion.entries {
            let key: u64 = e.indices.iter().map(|&(j, k)| mult[j] * k as u64).sum();
            let slot = merged.entry(key).or_insert_with(|| (ComplexKahanSum::new(), 0));
            slot.0.add(e.b);
            slot.1 += 1;
        }
        for (key, (sum, contributing)) in merged {
            let frequency = base * key as f64;
            atoms.push(FrequencyAtom {
                frequency,
                weight: sum.value() * frequency,
                contributing,
            });
        }
    } else {
        // entries arrive frequency-sorted; a linear sweep merges neighbors
        for e in &expansion.entries {
            let merge = match atoms.last() {
                Some(last) => (e.frequency - last.frequency).abs() < 1e-12 * e.frequency.max(1.0),
                None => false,
            };
            if merge {
                let last = atoms.last_mut().unwrap();
                last.weight += e.b * last.frequency;
                last.contributing += 1;
            } else {
                atoms.push(FrequencyAtom {
                    frequency: e.frequency,
                    weight: e.b * e.frequency,
                    contributing: 1,
                });
            }
        }
    }
    atoms.retain(|a| a.frequency <= cutoff * (1.0 + 1e-12));
    Ok(AtomMeasure {
        atoms,
        cutoff,
    })
}
