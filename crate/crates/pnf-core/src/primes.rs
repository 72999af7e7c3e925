//! Prime enumeration for the Euler-product side of the explicit formula.

/// All primes up to an inclusive limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }
}

const SEGMENT: usize = 1 << 16;

/// Segmented Eratosthenes sieve; memory stays `O(sqrt X)` plus one
/// segment regardless of the limit.
pub fn sieve_primes(limit: u64) -> PrimeTable {
    if limit < 2 {
        return PrimeTable {
            primes: Vec::new(),
            limit,
        };
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut small = vec![true; (root + 1) as usize];
    small[0] = false;
    if root >= 1 {
        small[1] = false;
    }
    let mut base = Vec::new();
    for p in 2..=root {
        if small[p as usize] {
            base.push(p);
            let mut q = p * p;
            while q <= root {
                small[q as usize] = false;
                q += p;
            }
        }
    }
    let mut primes: Vec<u64> = base.iter().copied().filter(|&p| p <= limit).collect();
    let mut lo = root + 1;
    let mut segment = vec![true; SEGMENT];
    while lo <= limit {
        let hi = (lo + SEGMENT as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            // first multiple of p inside [lo, hi]
            let mut q = lo.div_ceil(p) * p;
            while q <= hi {
                segment[(q - lo) as usize] = false;
                q += p;
            }
        }
        for (i, &alive) in segment[..len].iter().enumerate() {
            if alive {
                primes.push(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    PrimeTable { primes, limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes_are_right() {
        assert_eq!(sieve_primes(10).primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).primes(), &[2]);
        assert_eq!(sieve_primes(1).count(), 0);
    }

    #[test]
    fn prime_counts_match_known_pi() {
        assert_eq!(sieve_primes(100).count(), 25);
        assert_eq!(sieve_primes(1_000_000).count(), 78_498);
    }

    #[test]
    fn segmented_output_is_prime_and_complete() {
        let table = sieve_primes(100_000);
        let is_prime = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        // spot-check across segment boundaries and a dense window
        for &p in table.primes() {
            if p % 997 == 0 || p < 100 {
                assert!(is_prime(p), "{p} reported prime");
            }
        }
        for n in 65_500..65_600u64 {
            assert_eq!(table.primes().binary_search(&n).is_ok(), is_prime(n), "{n}");
        }
        assert!(table.primes().windows(2).all(|w| w[0] < w[1]));
    }
}
