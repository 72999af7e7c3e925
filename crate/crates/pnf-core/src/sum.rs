//! Compensated accumulation used by every long summation in the crate.
//!
//! Divisor sums and atom sums routinely mix terms spanning ten orders of
//! magnitude, so plain `+=` loses the small tail that the tail estimates
//! are supposed to bound.  Kahan-Babuska compensation keeps the rounding
//! error of an n-term sum at O(eps) instead of O(n * eps).

use num_complex::Complex64;

/// Kahan-Babuska compensated sum of real terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexKahanSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexKahanSum {
    #[inline]
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: Complex64) {
        self.re.add(term.re);
        self.im.add(term.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator of real terms.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = KahanSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}
