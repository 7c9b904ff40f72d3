//! Splitting behaviour of rational primes in finite Galois extensions of ℚ.
//!
//! Two computable descriptions of an extension `L/ℚ` are supported:
//!
//! * an abelian residue model, the subfield of ℚ(ζ_m) fixed by a subgroup
//!   `H ⊆ (ℤ/mℤ)^×`, where `p ∤ m` splits completely iff `p mod m ∈ H`;
//! * the splitting field of a monic squarefree integer polynomial `f`, where
//!   an unramified `p` splits completely iff `f mod p` is a product of
//!   distinct linear factors.
//!
//! Ramified primes are not classified. Every query at a ramified prime
//! returns [`SplitError::Ramified`]; set-level views ([`crate::sets`]) treat
//! them as non-members, which leaves all densities unchanged.

pub mod config;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::{self, IntPoly, PolyError};
use crate::primes::{is_prime, mul_mod};

pub use config::ModelConfig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("prime {0} is ramified or otherwise bad for this model")]
    Ramified(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid model: field `{field}`: {reason}")]
    InvalidModel { field: &'static str, reason: String },
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error(
        "Frobenius at {p} has order {order}, which does not divide the declared Galois order {galois_order}"
    )]
    GaloisOrderMismatch { p: u64, order: u64, galois_order: u64 },
}

impl SplitError {
    fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        SplitError::InvalidModel {
            field,
            reason: reason.into(),
        }
    }
}

impl From<PolyError> for SplitError {
    fn from(e: PolyError) -> Self {
        SplitError::invalid("poly", e.to_string())
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The subfield of the `modulus`-th cyclotomic field fixed by `residues`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianModel {
    modulus: u64,
    residues: BTreeSet<u64>,
}

impl AbelianModel {
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, SplitError> {
        if modulus == 0 {
            return Err(SplitError::invalid("modulus", "must be positive"));
        }
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % modulus).collect();
        if let Some(r) = residues.iter().find(|&&r| r.gcd(&modulus) != 1 && modulus > 1) {
            return Err(SplitError::invalid(
                "residues",
                format!("{r} is not a unit modulo {modulus}"),
            ));
        }
        if !residues.contains(&(1 % modulus)) {
            return Err(SplitError::invalid("residues", "subgroup must contain 1"));
        }
        for &a in &residues {
            for &b in &residues {
                let ab = mul_mod(a, b, modulus);
                if !residues.contains(&ab) {
                    return Err(SplitError::invalid(
                        "residues",
                        format!("not closed under multiplication: {a}·{b} ≡ {ab} mod {modulus}"),
                    ));
                }
            }
        }
        Ok(AbelianModel { modulus, residues })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn degree(&self) -> u64 {
        euler_phi(self.modulus) / self.residues.len() as u64
    }

    /// Order of `p` in `(ℤ/mℤ)^× / H`.
    fn frobenius_order(&self, p: u64) -> u64 {
        let base = p % self.modulus;
        let mut x = base;
        let mut k = 1;
        while !self.residues.contains(&x) {
            x = mul_mod(x, base, self.modulus);
            k += 1;
        }
        k
    }
}

/// The splitting field of a monic squarefree polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingFieldModel {
    poly: IntPoly,
    galois_order: u64,
    discriminant: BigInt,
    disc_small: Option<u128>,
    extra_bad: BTreeSet<u64>,
}

impl SplittingFieldModel {
    /// `extra_bad` lists additional primes to exclude. Prime divisors of the
    /// discriminant are always excluded, whether listed or not.
    pub fn new(
        coeffs: Vec<i64>,
        galois_order: u64,
        extra_bad: impl IntoIterator<Item = u64>,
    ) -> Result<Self, SplitError> {
        let poly = IntPoly::monic(coeffs)?;
        if galois_order == 0 {
            return Err(SplitError::invalid("galois_order", "must be positive"));
        }
        if galois_order % poly.degree() as u64 != 0 {
            return Err(SplitError::invalid(
                "galois_order",
                format!("{galois_order} is not divisible by deg f = {}", poly.degree()),
            ));
        }
        let discriminant = poly.discriminant();
        if discriminant.is_zero() {
            return Err(SplitError::invalid(
                "poly",
                format!("{poly} is not squarefree (gcd(f, f') is not constant)"),
            ));
        }
        let disc_small = discriminant.magnitude().to_u128();
        Ok(SplittingFieldModel {
            poly,
            galois_order,
            discriminant,
            disc_small,
            extra_bad: extra_bad.into_iter().collect(),
        })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn galois_order(&self) -> u64 {
        self.galois_order
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    fn is_bad(&self, p: u64) -> bool {
        if self.extra_bad.contains(&p) {
            return true;
        }
        match self.disc_small {
            Some(d) => d % p as u128 == 0,
            None => (&self.discriminant % BigInt::from(p)).is_zero(),
        }
    }

    /// Known bad primes: the explicit list plus the prime divisors of the
    /// discriminant (when it factors by trial division to 10^6).
    pub fn bad_primes(&self) -> Option<BTreeSet<u64>> {
        let mut out = self.extra_bad.clone();
        out.extend(poly::prime_divisors(&self.discriminant, 1_000_000)?);
        Some(out)
    }
}

/// A computable finite Galois extension `L/ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisExtensionModel {
    Abelian(AbelianModel),
    SplittingField(SplittingFieldModel),
}

impl GaloisExtensionModel {
    pub fn abelian(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self, SplitError> {
        AbelianModel::new(modulus, residues).map(Self::Abelian)
    }

    /// Splitting field of `f` (coefficients constant term first) with bad
    /// primes taken from the discriminant.
    pub fn splitting_field(coeffs: Vec<i64>, galois_order: u64) -> Result<Self, SplitError> {
        SplittingFieldModel::new(coeffs, galois_order, []).map(Self::SplittingField)
    }

    /// `[L:ℚ]`.
    pub fn degree(&self) -> u64 {
        match self {
            Self::Abelian(m) => m.degree(),
            Self::SplittingField(m) => m.galois_order,
        }
    }

    pub fn is_ramified(&self, p: u64) -> bool {
        match self {
            Self::Abelian(m) => m.modulus % p == 0,
            Self::SplittingField(m) => m.is_bad(p),
        }
    }

    /// Splitting test for a prime already known to be prime and good.
    pub(crate) fn splits_unchecked(&self, p: u64) -> bool {
        match self {
            Self::Abelian(m) => m.residues.contains(&(p % m.modulus)),
            Self::SplittingField(m) => poly::frobenius_fixes_x(&m.poly.reduce(p), p),
        }
    }

    pub(crate) fn cycle_type_unchecked(&self, p: u64) -> Result<FrobeniusCycleType, SplitError> {
        let cycle = match self {
            Self::Abelian(m) => {
                // the Frobenius generates a cyclic subgroup acting freely on L
                let k = m.frobenius_order(p) as usize;
                FrobeniusCycleType::new(vec![k; m.degree() as usize / k])
            }
            Self::SplittingField(m) => {
                let cycle =
                    FrobeniusCycleType::new(poly::distinct_degree_pattern(&m.poly.reduce(p), p));
                let order = cycle.order();
                if m.galois_order % order != 0 {
                    return Err(SplitError::GaloisOrderMismatch {
                        p,
                        order,
                        galois_order: m.galois_order,
                    });
                }
                cycle
            }
        };
        Ok(cycle)
    }

    fn check_prime(&self, p: u64) -> Result<(), SplitError> {
        if !is_prime(p) {
            return Err(SplitError::NotPrime(p));
        }
        if self.is_ramified(p) {
            return Err(SplitError::Ramified(p));
        }
        Ok(())
    }
}

impl fmt::Display for GaloisExtensionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Abelian(m) => {
                let h: Vec<String> = m.residues.iter().map(u64::to_string).collect();
                write!(f, "Q(zeta_{})^<{}>", m.modulus, h.join(","))
            }
            Self::SplittingField(m) => write!(f, "splitting field of {}", m.poly),
        }
    }
}

/// Residue-field degrees of the primes above `p`, ascending. For a
/// polynomial model these are the degrees of the irreducible factors of
/// `f mod p`, i.e. the cycle lengths of the Frobenius acting on the roots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FrobeniusCycleType(Vec<usize>);

impl FrobeniusCycleType {
    pub fn new(mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable();
        FrobeniusCycleType(degrees)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn degree_sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// Order of the Frobenius: the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &d| acc.lcm(&(d as u64)))
    }

    pub fn is_split(&self) -> bool {
        self.0.iter().all(|&d| d == 1)
    }
}

impl fmt::Display for FrobeniusCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Membership test of `Spl(L/ℚ)`.
pub fn splits_completely(model: &GaloisExtensionModel, p: u64) -> Result<bool, SplitError> {
    model.check_prime(p)?;
    Ok(model.splits_unchecked(p))
}

pub fn frobenius_cycle_type(
    model: &GaloisExtensionModel,
    p: u64,
) -> Result<FrobeniusCycleType, SplitError> {
    model.check_prime(p)?;
    model.cycle_type_unchecked(p)
}

/// Which primes of a model a predicate selects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgressionMode {
    SplitsCompletely,
    /// Frobenius with this cycle type. Coarser than a conjugacy class when
    /// distinct classes share a cycle type.
    CycleTypeEquals(FrobeniusCycleType),
    /// Abelian models only: `p mod m` lies in the given residue set.
    ResidueIn(BTreeSet<u64>),
}

/// A set of primes defined by splitting data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplittingPredicate {
    Progression {
        model: GaloisExtensionModel,
        mode: ProgressionMode,
    },
    /// Primes splitting completely in every listed model, i.e. `Spl` of the
    /// compositum.
    AllSplit(Vec<GaloisExtensionModel>),
}

impl SplittingPredicate {
    pub fn spl(model: GaloisExtensionModel) -> Self {
        Self::Progression {
            model,
            mode: ProgressionMode::SplitsCompletely,
        }
    }

    pub fn progression(model: GaloisExtensionModel, mode: ProgressionMode) -> Result<Self, SplitError> {
        if let (ProgressionMode::ResidueIn(set), model) = (&mode, &model) {
            let GaloisExtensionModel::Abelian(m) = model else {
                return Err(SplitError::InvalidPredicate(
                    "residue classes require an abelian model".into(),
                ));
            };
            if let Some(r) = set.iter().find(|&&r| r >= m.modulus) {
                return Err(SplitError::InvalidPredicate(format!(
                    "residue {r} is not reduced modulo {}",
                    m.modulus
                )));
            }
        }
        Ok(Self::Progression { model, mode })
    }

    pub fn is_excluded(&self, p: u64) -> bool {
        match self {
            Self::Progression { model, .. } => model.is_ramified(p),
            Self::AllSplit(models) => models.iter().any(|m| m.is_ramified(p)),
        }
    }

    pub(crate) fn contains_unchecked(&self, p: u64) -> Result<bool, SplitError> {
        match self {
            Self::Progression { model, mode } => match mode {
                ProgressionMode::SplitsCompletely => Ok(model.splits_unchecked(p)),
                ProgressionMode::CycleTypeEquals(target) => {
                    Ok(&model.cycle_type_unchecked(p)? == target)
                }
                ProgressionMode::ResidueIn(set) => match model {
                    GaloisExtensionModel::Abelian(m) => Ok(set.contains(&(p % m.modulus))),
                    GaloisExtensionModel::SplittingField(_) => Err(SplitError::InvalidPredicate(
                        "residue classes require an abelian model".into(),
                    )),
                },
            },
            Self::AllSplit(models) => Ok(models.iter().all(|m| m.splits_unchecked(p))),
        }
    }
}

/// Whether `p` lies in the generalized progression described by `pred`.
pub fn in_progression(pred: &SplittingPredicate, p: u64) -> Result<bool, SplitError> {
    if !is_prime(p) {
        return Err(SplitError::NotPrime(p));
    }
    if pred.is_excluded(p) {
        return Err(SplitError::Ramified(p));
    }
    pred.contains_unchecked(p)
}

/// Predicate for primes splitting completely in every model. Bad primes of
/// any constituent are excluded.
pub fn intersect_splitting(models: Vec<GaloisExtensionModel>) -> Result<SplittingPredicate, SplitError> {
    if models.is_empty() {
        return Err(SplitError::InvalidPredicate("empty model list".into()));
    }
    Ok(SplittingPredicate::AllSplit(models))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{sieve_primes, PrimeRange};

    fn x2_plus_1() -> GaloisExtensionModel {
        GaloisExtensionModel::splitting_field(vec![1, 0, 1], 2).unwrap()
    }

    fn x3_minus_2() -> GaloisExtensionModel {
        GaloisExtensionModel::splitting_field(vec![-2, 0, 0, 1], 6).unwrap()
    }

    fn quadratic(d: i64) -> GaloisExtensionModel {
        GaloisExtensionModel::splitting_field(vec![-d, 0, 1], 2).unwrap()
    }

    fn ct(d: &[usize]) -> FrobeniusCycleType {
        FrobeniusCycleType::new(d.to_vec())
    }

    // brute-force oracle: count roots of f mod p by evaluation
    fn root_count(coeffs: &[i64], p: u64) -> usize {
        (0..p as i64)
            .filter(|&x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(0i64, |acc, &c| (acc * x + c).rem_euclid(p as i64))
                    == 0
            })
            .count()
    }

    #[test]
    fn splits_completely_examples() {
        let cyclo4 = GaloisExtensionModel::abelian(4, [1]).unwrap();
        assert!(splits_completely(&cyclo4, 5).unwrap());
        assert!(!splits_completely(&x2_plus_1(), 7).unwrap());
        assert!(splits_completely(&x3_minus_2(), 31).unwrap());
        assert_eq!(splits_completely(&x2_plus_1(), 2), Err(SplitError::Ramified(2)));
        assert_eq!(splits_completely(&x3_minus_2(), 3), Err(SplitError::Ramified(3)));
        assert_eq!(splits_completely(&x2_plus_1(), 9), Err(SplitError::NotPrime(9)));
    }

    #[test]
    fn cubic_residue_oracle_at_31() {
        // 2 ≡ 4^3 mod 31 and 31 ≡ 1 mod 3, so x^3 - 2 has three roots
        assert_eq!(4u64.pow(3) % 31, 2);
        assert_eq!(root_count(&[-2, 0, 0, 1], 31), 3);
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(frobenius_cycle_type(&x2_plus_1(), 13).unwrap(), ct(&[1, 1]));
        assert_eq!(frobenius_cycle_type(&x2_plus_1(), 7).unwrap(), ct(&[2]));
        assert_eq!(frobenius_cycle_type(&x3_minus_2(), 5).unwrap(), ct(&[1, 2]));
        assert_eq!(frobenius_cycle_type(&x3_minus_2(), 7).unwrap(), ct(&[3]));
        assert_eq!(frobenius_cycle_type(&x3_minus_2(), 2), Err(SplitError::Ramified(2)));
    }

    #[test]
    fn abelian_cycle_types() {
        // ℚ(ζ_5), degree 4: p ≡ 4 has order 2, p ≡ 2,3 order 4
        let m = GaloisExtensionModel::abelian(5, [1]).unwrap();
        assert_eq!(frobenius_cycle_type(&m, 11).unwrap(), ct(&[1, 1, 1, 1]));
        assert_eq!(frobenius_cycle_type(&m, 19).unwrap(), ct(&[2, 2]));
        assert_eq!(frobenius_cycle_type(&m, 7).unwrap(), ct(&[4]));
        // fixed field of {1,4}: real subfield of degree 2
        let real = GaloisExtensionModel::abelian(5, [1, 4]).unwrap();
        assert_eq!(real.degree(), 2);
        assert_eq!(frobenius_cycle_type(&real, 19).unwrap(), ct(&[1, 1]));
        assert_eq!(frobenius_cycle_type(&real, 7).unwrap(), ct(&[2]));
    }

    #[test]
    fn progression_examples() {
        let spl = SplittingPredicate::spl(x2_plus_1());
        assert!(in_progression(&spl, 13).unwrap());
        let inert = SplittingPredicate::progression(
            x2_plus_1(),
            ProgressionMode::CycleTypeEquals(ct(&[2])),
        )
        .unwrap();
        assert!(in_progression(&inert, 7).unwrap());
        let cubic = SplittingPredicate::progression(
            x3_minus_2(),
            ProgressionMode::CycleTypeEquals(ct(&[3])),
        )
        .unwrap();
        assert!(!in_progression(&cubic, 31).unwrap());
        let residues = SplittingPredicate::progression(
            GaloisExtensionModel::abelian(4, [1]).unwrap(),
            ProgressionMode::ResidueIn([3].into()),
        )
        .unwrap();
        assert!(in_progression(&residues, 7).unwrap());
        assert!(!in_progression(&residues, 13).unwrap());
        assert_eq!(in_progression(&residues, 2), Err(SplitError::Ramified(2)));
    }

    #[test]
    fn residue_mode_needs_abelian_model() {
        let r = SplittingPredicate::progression(x2_plus_1(), ProgressionMode::ResidueIn([1].into()));
        assert!(matches!(r, Err(SplitError::InvalidPredicate(_))));
        let r = SplittingPredicate::progression(
            GaloisExtensionModel::abelian(4, [1]).unwrap(),
            ProgressionMode::ResidueIn([5].into()),
        );
        assert!(matches!(r, Err(SplitError::InvalidPredicate(_))));
    }

    #[test]
    fn intersection_examples() {
        let both = intersect_splitting(vec![quadratic(2), quadratic(3)]).unwrap();
        assert!(in_progression(&both, 23).unwrap());
        assert!(!in_progression(&both, 5).unwrap());
        assert_eq!(in_progression(&both, 3), Err(SplitError::Ramified(3)));
        let single = intersect_splitting(vec![x2_plus_1()]).unwrap();
        assert!(in_progression(&single, 5).unwrap());
        assert!(intersect_splitting(vec![]).is_err());
    }

    #[test]
    fn abelian_validation() {
        assert!(GaloisExtensionModel::abelian(0, [1]).is_err());
        assert!(GaloisExtensionModel::abelian(8, [3]).is_err()); // no 1
        assert!(GaloisExtensionModel::abelian(8, [1, 2]).is_err()); // 2 not a unit
        assert!(GaloisExtensionModel::abelian(7, [1, 2]).is_err()); // 4 missing
        let sq = GaloisExtensionModel::abelian(7, [1, 2, 4]).unwrap();
        assert_eq!(sq.degree(), 2);
        let trivial = GaloisExtensionModel::abelian(1, [1]).unwrap();
        assert_eq!(trivial.degree(), 1);
        assert!(splits_completely(&trivial, 101).unwrap());
    }

    #[test]
    fn splitting_field_validation() {
        assert!(matches!(
            GaloisExtensionModel::splitting_field(vec![1, 2, 1], 2),
            Err(SplitError::InvalidModel { field: "poly", .. })
        ));
        assert!(matches!(
            GaloisExtensionModel::splitting_field(vec![-2, 0, 0, 1], 4),
            Err(SplitError::InvalidModel { field: "galois_order", .. })
        ));
        assert!(matches!(
            GaloisExtensionModel::splitting_field(vec![1, 0, 2], 2),
            Err(SplitError::InvalidModel { field: "poly", .. })
        ));
    }

    #[test]
    fn declared_order_mismatch_is_diagnosed() {
        // x^3 - 2 declared with order 3: an inert-degree-2 prime exposes it
        let wrong = GaloisExtensionModel::splitting_field(vec![-2, 0, 0, 1], 3).unwrap();
        assert_eq!(
            frobenius_cycle_type(&wrong, 5),
            Err(SplitError::GaloisOrderMismatch { p: 5, order: 2, galois_order: 3 })
        );
    }

    #[test]
    fn bad_primes_from_discriminant() {
        let GaloisExtensionModel::SplittingField(m) = x3_minus_2() else { unreachable!() };
        assert_eq!(m.bad_primes().unwrap(), BTreeSet::from([2, 3]));
        let extra = SplittingFieldModel::new(vec![1, 0, 1], 2, [5]).unwrap();
        assert_eq!(extra.bad_primes().unwrap(), BTreeSet::from([2, 5]));
        let model = GaloisExtensionModel::SplittingField(extra);
        assert_eq!(splits_completely(&model, 5), Err(SplitError::Ramified(5)));
    }

    #[test]
    fn model_agreement_to_one_million() {
        let poly = x2_plus_1();
        let cyclo = GaloisExtensionModel::abelian(4, [1]).unwrap();
        for p in sieve_primes(&PrimeRange::below(1_000_000)).unwrap().into_iter().skip(1) {
            assert_eq!(
                splits_completely(&poly, p).unwrap(),
                splits_completely(&cyclo, p).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn galois_quadratics_have_uniform_cycle_types() {
        let primes = sieve_primes(&PrimeRange::below(100_000)).unwrap();
        for d in [2, 3, 5, -1, -3, 7] {
            let model = quadratic(d);
            for &p in &primes {
                if model.is_ramified(p) {
                    continue;
                }
                let cycle = frobenius_cycle_type(&model, p).unwrap();
                assert!(cycle.degrees().iter().all(|&e| e == cycle.degrees()[0]));
                assert_eq!(cycle.degree_sum(), 2);
            }
        }
    }

    #[test]
    fn split_iff_all_ones_and_root_count_oracle() {
        let models = [
            (vec![-2, 0, 0, 1], 6),
            (vec![1, -1, 0, 1], 6),
            (vec![6, 0, -5, 0, 1], 4),
            (vec![1, 1, 1, 1, 1], 4),
        ];
        let primes = sieve_primes(&PrimeRange::below(600)).unwrap();
        for (coeffs, n) in models {
            let model = GaloisExtensionModel::splitting_field(coeffs.clone(), n).unwrap();
            for &p in &primes {
                if model.is_ramified(p) {
                    continue;
                }
                let cycle = frobenius_cycle_type(&model, p).unwrap();
                let split = splits_completely(&model, p).unwrap();
                assert_eq!(split, cycle.is_split(), "{model} at {p}");
                assert_eq!(cycle.degree_sum(), coeffs.len() - 1);
                let linear = cycle.degrees().iter().filter(|&&d| d == 1).count();
                assert_eq!(linear, root_count(&coeffs, p), "{model} at {p}");
            }
        }
    }
}
