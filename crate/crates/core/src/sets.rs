//! Sets of rational primes as membership predicates.
//!
//! Callers only ever ask about primes, so implementations may assume their
//! argument is prime. Ramified primes of a splitting predicate are reported
//! as non-members.

use std::collections::BTreeSet;

use crate::splitting::{GaloisExtensionModel, SplitError, SplittingPredicate};

pub trait PrimeSet: Sync {
    fn contains(&self, p: u64) -> Result<bool, SplitError>;
}

impl<T: PrimeSet + ?Sized> PrimeSet for &T {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        (**self).contains(p)
    }
}

impl<T: PrimeSet + ?Sized + Send> PrimeSet for Box<T> {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        (**self).contains(p)
    }
}

impl PrimeSet for SplittingPredicate {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        if self.is_excluded(p) {
            return Ok(false);
        }
        self.contains_unchecked(p)
    }
}

/// `Spl(L/ℚ)`.
impl PrimeSet for GaloisExtensionModel {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        Ok(!self.is_ramified(p) && self.splits_unchecked(p))
    }
}

/// Every prime.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllPrimes;

impl PrimeSet for AllPrimes {
    fn contains(&self, _p: u64) -> Result<bool, SplitError> {
        Ok(true)
    }
}

/// An explicit finite set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrimeList(pub BTreeSet<u64>);

impl PrimeList {
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<u64> for PrimeList {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        PrimeList(iter.into_iter().collect())
    }
}

impl PrimeSet for PrimeList {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        Ok(self.0.contains(&p))
    }
}

/// Primes `p ≡ r (mod m)` for some listed `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueClasses {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
}

impl PrimeSet for ResidueClasses {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        Ok(self.residues.contains(&(p % self.modulus)))
    }
}

pub struct Union<S>(pub Vec<S>);

impl<S: PrimeSet> PrimeSet for Union<S> {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        for s in &self.0 {
            if s.contains(p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub struct Intersection<S>(pub Vec<S>);

impl<S: PrimeSet> PrimeSet for Intersection<S> {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        for s in &self.0 {
            if !s.contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `𝒫 ∖ A`.
pub struct Complement<S>(pub S);

impl<S: PrimeSet> PrimeSet for Complement<S> {
    fn contains(&self, p: u64) -> Result<bool, SplitError> {
        self.0.contains(p).map(|b| !b)
    }
}
