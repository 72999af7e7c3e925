//! Digamma function on the complex plane.
//!
//! Strategy: conjugate to the upper half plane, reflect `Re z < 1/2`
//! through `psi(1-z) - pi cot(pi z)`, push the argument right with
//! `psi(z) = psi(z+1) - 1/z` until `Re z >= 10`, then use the Stirling
//! series.  Seven Bernoulli terms leave the asymptotic error below
//! 1e-16 at that radius.

use num_complex::Complex64;
use thiserror::Error;

/// `B_{2n} / 2n` for the Stirling tail of `psi`.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

#[derive(Debug, Error)]
#[error("digamma pole at the nonpositive integer {at}")]
pub struct PoleError {
    pub at: f64,
}

/// `psi(z) = Gamma'(z)/Gamma(z)`; errors exactly at the poles `0, -1, ...`
pub fn digamma(z: Complex64) -> Result<Complex64, PoleError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(PoleError { at: z.re });
    }
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return digamma_unchecked(z.conj()).conj();
    }
    if z.re < 0.5 {
        // pi cot(pi z) via exponentials: with Im z >= 0, |e^{2 pi i z}| <= 1
        let cot = if z.im > 8.0 {
            let q = (2.0 * std::f64::consts::PI * Complex64::i() * z).exp();
            Complex64::i() * (q + 1.0) / (q - 1.0)
        } else {
            let w = std::f64::consts::PI * z;
            w.cos() / w.sin()
        };
        return digamma_unchecked(1.0 - z) - std::f64::consts::PI * cot;
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 10.0 {
        shift += 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for c in STIRLING {
        tail += c * power;
        power *= inv2;
    }
    w.ln() - 0.5 / w - tail - shift
}
