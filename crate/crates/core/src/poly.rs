//! Integer polynomials and dense polynomial arithmetic over 𝔽_p.
//!
//! Coefficient vectors are stored constant term first. Mod-p vectors are kept
//! trimmed: no trailing zeros, and the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::primes::{mul_mod, pow_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is zero")]
    Zero,
    #[error("polynomial must have degree at least 1")]
    Constant,
    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(i64),
}

/// A nonzero integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self, PolyError> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::Zero);
        }
        Ok(IntPoly { coeffs })
    }

    /// Monic polynomial of degree ≥ 1, the shape every splitting model needs.
    pub fn monic(coeffs: Vec<i64>) -> Result<Self, PolyError> {
        let f = Self::new(coeffs)?;
        if f.degree() == 0 {
            return Err(PolyError::Constant);
        }
        if f.leading() != 1 {
            return Err(PolyError::NotMonic(f.leading()));
        }
        Ok(f)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    fn big_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| BigInt::from(c) * i)
            .collect()
    }

    /// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`. Zero exactly when
    /// `f` has a repeated factor over ℚ.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let res = resultant(&self.big_coeffs(), &self.derivative());
        let (q, r) = res.div_rem(&BigInt::from(self.leading()));
        debug_assert!(r.is_zero());
        if (n * (n - 1) / 2) % 2 == 1 {
            -q
        } else {
            q
        }
    }

    /// Reduction mod `p` as a trimmed coefficient vector.
    pub fn reduce(&self, p: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
            .collect();
        trim(&mut out);
        out
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Resultant through the Sylvester matrix, fraction-free Gaussian elimination.
fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // leading coefficient first in each row
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_determinant(rows)
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Distinct prime divisors of `n` by trial division, or `None` when a
/// cofactor above `bound²` remains unfactored.
pub fn prime_divisors(n: &BigInt, bound: u64) -> Option<Vec<u64>> {
    let mut rest = n.abs();
    if rest.is_zero() {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= bound {
        let big_d = BigInt::from(d);
        if &big_d * &big_d > rest {
            break;
        }
        if (&rest % &big_d).is_zero() {
            out.push(d);
            while (&rest % &big_d).is_zero() {
                rest /= &big_d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some(out);
    }
    let reached_sqrt = BigInt::from(d) * BigInt::from(d) > rest;
    if reached_sqrt {
        // no factor ≤ sqrt(rest), so rest is prime
        out.push(rest.try_into().ok()?);
        out.sort_unstable();
        return Some(out);
    }
    None
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn degree(v: &[u64]) -> Option<usize> {
    v.len().checked_sub(1)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `m`.
fn div_rem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dm = degree(m).expect("division by zero polynomial");
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= dm {
        return (Vec::new(), rem);
    }
    let lead_inv = inv_mod(m[dm], p);
    let mut quot = vec![0u64; rem.len() - dm];
    while rem.len() > dm {
        let shift = rem.len() - 1 - dm;
        let coef = mul_mod(*rem.last().unwrap(), lead_inv, p);
        quot[shift] = coef;
        for (j, &c) in m.iter().enumerate() {
            let t = mul_mod(coef, c, p);
            rem[shift + j] = (rem[shift + j] + p - t) % p;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    div_rem(a, m, p).1
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

fn pow_rem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_rem(&b, &b, m, p);
        }
    }
    acc
}

fn make_monic(v: &mut [u64], p: u64) {
    if let Some(&lead) = v.last() {
        let inv = inv_mod(lead, p);
        for c in v.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

const X: [u64; 2] = [0, 1];

/// True iff `x^p ≡ x (mod f, p)`. For squarefree `f mod p` this is exactly
/// the condition that `f` splits into distinct linear factors over 𝔽_p.
pub fn frobenius_fixes_x(f: &[u64], p: u64) -> bool {
    let x = rem(&X, f, p);
    pow_rem(&X, p, f, p) == x
}

/// Factor degrees of a squarefree `f` over 𝔽_p by distinct-degree
/// factorization, ascending.
pub fn distinct_degree_pattern(f: &[u64], p: u64) -> Vec<usize> {
    let mut g = f.to_vec();
    trim(&mut g);
    make_monic(&mut g, p);
    let mut degrees = Vec::new();
    let mut h = rem(&X, &g, p);
    let mut i = 1;
    while degree(&g).is_some_and(|d| d >= 2 * i) {
        h = pow_rem(&h, p, &g, p);
        let d = gcd(&sub(&h, &X, p), &g, p);
        let dd = degree(&d).unwrap_or(0);
        if dd > 0 {
            degrees.extend(std::iter::repeat_n(i, dd / i));
            g = div_rem(&g, &d, p).0;
            h = rem(&h, &g, p);
        }
        i += 1;
    }
    if let Some(d) = degree(&g) {
        if d > 0 {
            degrees.push(d);
        }
    }
    degrees
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_roots(f: &[u64], p: u64) -> usize {
        (0..p)
            .filter(|&x| {
                f.iter()
                    .rev()
                    .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
                    == 0
            })
            .count()
    }

    #[test]
    fn discriminants() {
        assert_eq!(IntPoly::new(vec![1, 0, 1]).unwrap().discriminant(), BigInt::from(-4));
        assert_eq!(IntPoly::new(vec![-2, 0, 0, 1]).unwrap().discriminant(), BigInt::from(-108));
        // x^2 + bx + c → b^2 - 4c
        assert_eq!(IntPoly::new(vec![3, 5, 1]).unwrap().discriminant(), BigInt::from(13));
        // x^3 + ax + b → -4a^3 - 27b^2
        assert_eq!(IntPoly::new(vec![1, -1, 0, 1]).unwrap().discriminant(), BigInt::from(-23));
        // repeated root
        assert!(IntPoly::new(vec![1, 2, 1]).unwrap().discriminant().is_zero());
        // (x^2 - 2)(x^2 - 3): (2√2)^2 (2√3)^2 (2-3)^2 (2-3)^2 = 96
        assert_eq!(IntPoly::new(vec![6, 0, -5, 0, 1]).unwrap().discriminant(), BigInt::from(96));
    }

    #[test]
    fn monic_validation() {
        assert_eq!(IntPoly::monic(vec![1, 0, 2]), Err(PolyError::NotMonic(2)));
        assert_eq!(IntPoly::monic(vec![5]), Err(PolyError::Constant));
        assert_eq!(IntPoly::monic(vec![0, 0]), Err(PolyError::Zero));
        assert_eq!(IntPoly::monic(vec![1, 0, 1, 0]).unwrap().degree(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::new(vec![-2, 0, 0, 1]).unwrap().to_string(), "x^3 - 2");
        assert_eq!(IntPoly::new(vec![1, -1, 3]).unwrap().to_string(), "3x^2 - x + 1");
    }

    #[test]
    fn reduce_negative_coefficients() {
        assert_eq!(IntPoly::new(vec![-2, 0, 0, 1]).unwrap().reduce(5), vec![3, 0, 0, 1]);
        assert_eq!(IntPoly::new(vec![-7, 0, 1]).unwrap().reduce(7), vec![0, 0, 1]);
    }

    #[test]
    fn divisors_of_discriminant() {
        assert_eq!(prime_divisors(&BigInt::from(-108), 1000), Some(vec![2, 3]));
        assert_eq!(prime_divisors(&BigInt::from(96), 1000), Some(vec![2, 3]));
        assert_eq!(prime_divisors(&BigInt::from(1_000_003u64 * 2), 10), None);
        assert_eq!(prime_divisors(&BigInt::from(1_000_003u64 * 2), 2000), Some(vec![2, 1_000_003]));
        assert_eq!(prime_divisors(&BigInt::zero(), 10), None);
    }

    #[test]
    fn ddf_known_patterns() {
        let f = IntPoly::new(vec![1, 0, 1]).unwrap();
        assert_eq!(distinct_degree_pattern(&f.reduce(13), 13), vec![1, 1]);
        assert_eq!(distinct_degree_pattern(&f.reduce(7), 7), vec![2]);
        let g = IntPoly::new(vec![-2, 0, 0, 1]).unwrap();
        assert_eq!(distinct_degree_pattern(&g.reduce(5), 5), vec![1, 2]);
        assert_eq!(distinct_degree_pattern(&g.reduce(7), 7), vec![3]);
        assert_eq!(distinct_degree_pattern(&g.reduce(31), 31), vec![1, 1, 1]);
    }

    #[test]
    fn ddf_linear_count_matches_root_count() {
        let f = IntPoly::new(vec![3, -4, 0, 1, 0, 1]).unwrap();
        let disc = f.discriminant();
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
            if (&disc % BigInt::from(p)).is_zero() {
                continue;
            }
            let reduced = f.reduce(p);
            let pattern = distinct_degree_pattern(&reduced, p);
            assert_eq!(pattern.iter().sum::<usize>(), 5, "p = {p}");
            let linear = pattern.iter().filter(|&&d| d == 1).count();
            assert_eq!(linear, brute_roots(&reduced, p), "p = {p}");
            assert_eq!(frobenius_fixes_x(&reduced, p), linear == 5, "p = {p}");
        }
    }

    #[test]
    fn frobenius_shortcut() {
        let f = IntPoly::new(vec![1, 0, 1]).unwrap();
        assert!(frobenius_fixes_x(&f.reduce(5), 5));
        assert!(!frobenius_fixes_x(&f.reduce(7), 7));
        // linear polynomials always split
        let l = IntPoly::new(vec![3, 1]).unwrap();
        assert!(frobenius_fixes_x(&l.reduce(11), 11));
        assert_eq!(distinct_degree_pattern(&l.reduce(11), 11), vec![1]);
    }
}
