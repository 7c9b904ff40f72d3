//! Segmented enumeration of rational primes.
//!
//! The base field of the empirical engine is ℚ, so every prime ideal is a
//! rational prime `p` with norm `p`. Ranges are half-open `[lo, hi)` and are
//! processed in fixed-size segments. Segments are independent, so they are
//! sieved in parallel and merged back in ascending segment order; the output
//! never depends on scheduling.

use rayon::prelude::*;
use thiserror::Error;

/// Default hard cap on the upper end of a range.
pub const DEFAULT_CAP: u64 = 1 << 40;

/// Default segment length (numbers per segment, not bytes).
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimeError {
    #[error("range end {hi} exceeds the configured cap {cap}; raise the cap explicitly to continue")]
    CapExceeded { hi: u64, cap: u64 },
    #[error("segment size must be positive")]
    ZeroSegment,
}

/// A half-open range `[lo, hi)` of integers to scan for primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub segment_size: u64,
    pub cap: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Self {
        PrimeRange {
            lo,
            hi,
            segment_size: DEFAULT_SEGMENT_SIZE,
            cap: DEFAULT_CAP,
        }
    }

    /// All primes below `hi`.
    pub fn below(hi: u64) -> Self {
        Self::new(2, hi)
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.segment_size = segment_size;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn effective_lo(&self) -> u64 {
        self.lo.max(2)
    }

    pub fn is_empty(&self) -> bool {
        self.effective_lo() >= self.hi
    }

    fn validate(&self) -> Result<(), PrimeError> {
        if self.segment_size == 0 {
            return Err(PrimeError::ZeroSegment);
        }
        if self.hi > self.cap {
            return Err(PrimeError::CapExceeded {
                hi: self.hi,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn segment_count(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.effective_lo()).div_ceil(self.segment_size)
        }
    }

    fn segment_bounds(&self, index: u64) -> (u64, u64) {
        let start = self.effective_lo() + index * self.segment_size;
        let end = start.saturating_add(self.segment_size).min(self.hi);
        (start, end)
    }
}

/// Primes below `limit` by a plain sieve. Used for the base primes of the
/// segmented sieve (`limit` is at most about 2^20 under the default cap).
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

fn sieve_segment(start: u64, end: u64, base: &[u64]) -> Vec<u64> {
    let len = (end - start) as usize;
    let mut composite = vec![false; len];
    for &q in base {
        if q.saturating_mul(q) >= end {
            break;
        }
        let first = (q * q).max(start.div_ceil(q) * q);
        let mut j = (first - start) as usize;
        let step = q as usize;
        while j < len {
            composite[j] = true;
            j += step;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| start + i as u64)
        .collect()
}

/// Sieves every segment of `range` in parallel and applies `per_segment` to
/// the primes of each. Results come back in ascending segment order.
pub fn map_segments<T, F>(range: &PrimeRange, per_segment: F) -> Result<Vec<T>, PrimeError>
where
    T: Send,
    F: Fn(&[u64]) -> T + Sync,
{
    range.validate()?;
    let count = range.segment_count();
    if count == 0 {
        return Ok(Vec::new());
    }
    let base = small_primes(isqrt(range.hi - 1) + 1);
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let (start, end) = range.segment_bounds(i);
            per_segment(&sieve_segment(start, end, &base))
        })
        .collect())
}

/// Exactly the primes in `[lo, hi)`, ascending.
pub fn sieve_primes(range: &PrimeRange) -> Result<Vec<u64>, PrimeError> {
    Ok(map_segments(range, |seg| seg.to_vec())?.concat())
}

pub fn prime_count(range: &PrimeRange) -> Result<u64, PrimeError> {
    Ok(map_segments(range, |seg| seg.len() as u64)?.iter().sum())
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_range() {
        assert_eq!(sieve_primes(&PrimeRange::new(2, 11)).unwrap(), vec![2, 3, 5, 7]);
        assert!(sieve_primes(&PrimeRange::new(2, 2)).unwrap().is_empty());
        assert!(sieve_primes(&PrimeRange::new(50, 10)).unwrap().is_empty());
        assert_eq!(prime_count(&PrimeRange::new(2, 3)).unwrap(), 1);
        assert_eq!(prime_count(&PrimeRange::new(2, 101)).unwrap(), 25);
    }

    #[test]
    fn lo_below_two_is_clamped() {
        assert_eq!(sieve_primes(&PrimeRange::new(0, 8)).unwrap(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn matches_trial_division_with_tiny_segments() {
        let range = PrimeRange::new(2, 5000).with_segment_size(37);
        let expected: Vec<u64> = (2..5000).filter(|&n| trial_division(n)).collect();
        assert_eq!(sieve_primes(&range).unwrap(), expected);
    }

    #[test]
    fn offset_range_near_square_boundaries() {
        let range = PrimeRange::new(9_990, 10_210).with_segment_size(16);
        let expected: Vec<u64> = (9_990..10_210).filter(|&n| trial_division(n)).collect();
        assert_eq!(sieve_primes(&range).unwrap(), expected);
    }

    #[test]
    fn count_to_one_million() {
        // independent oracle: count with a plain full-range sieve
        let oracle = small_primes(1_000_000).len() as u64;
        assert_eq!(oracle, 78_498);
        assert_eq!(prime_count(&PrimeRange::below(1_000_000)).unwrap(), oracle);
    }

    #[test]
    fn cap_is_enforced() {
        let err = sieve_primes(&PrimeRange::new(2, 1 << 41)).unwrap_err();
        assert_eq!(err, PrimeError::CapExceeded { hi: 1 << 41, cap: DEFAULT_CAP });
        assert!(sieve_primes(&PrimeRange::new(2, 100).with_cap(50)).is_err());
        assert_eq!(
            prime_count(&PrimeRange::new(2, 100).with_cap(100)).unwrap(),
            25
        );
    }

    #[test]
    fn zero_segment_rejected() {
        assert_eq!(
            prime_count(&PrimeRange::new(2, 100).with_segment_size(0)),
            Err(PrimeError::ZeroSegment)
        );
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime(1_000_000_007));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(u64::MAX));
        for n in 0..3000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn sieve_near_cap_uses_wide_arithmetic() {
        let hi = (1u64 << 40) - 1;
        let got = sieve_primes(&PrimeRange::new(hi - 200, hi)).unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(|&p| is_prime(p)));
        let expected = (hi - 200..hi).filter(|&n| is_prime(n)).count();
        assert_eq!(got.len(), expected);
    }
}
