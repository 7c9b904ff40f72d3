//! Exact density calculus for unions and intersections of prime sets.
//!
//! Everything here operates on exact rationals. Inputs are densities, not
//! sets; the only exception is [`truncated_inclusion_exclusion_check`],
//! which evaluates the partial-zeta form of inclusion-exclusion on explicit
//! finite sets.
//!
//! The tower model: `M/K` Galois of degree `m`, and `P_1, …, P_r` Galois over
//! `K`, each containing `M` with `[P_i:M] = t`, linearly disjoint over `M`.
//! Any `ℓ` of them have a compositum of degree `m·t^ℓ` over `K`, so by
//! Chebotarev the intersection of `ℓ` of the sets `Spl(P_i/K)` has density
//! `1/(m·t^ℓ)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rational_str, rational_to_string, ExactDensity};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("missing density for index subset {0:?}")]
    MissingSubset(Vec<usize>),
    #[error("inconsistent densities: {0}")]
    Inconsistent(String),
    #[error("ell = {ell} is outside [1, {r}]")]
    EllOutOfRange { ell: u64, r: u64 },
}

/// `m = [M:K]`, `t = [P_i:M]`, and the number `r` of extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TowerSpec {
    pub m: u64,
    pub t: u64,
    pub r: u64,
}

impl TowerSpec {
    pub fn new(m: u64, t: u64, r: u64) -> Result<Self, CalculusError> {
        if m == 0 {
            return Err(CalculusError::InvalidTower("m must be at least 1".into()));
        }
        if t < 2 {
            return Err(CalculusError::InvalidTower("t must be at least 2".into()));
        }
        if r == 0 {
            return Err(CalculusError::InvalidTower("r must be at least 1".into()));
        }
        if r > u32::MAX as u64 {
            return Err(CalculusError::InvalidTower(format!("r = {r} is too large")));
        }
        Ok(TowerSpec { m, t, r })
    }

    /// `m⁻¹ (1 - t⁻¹)^r`, the density of `Spl(M/K)` not covered by the union.
    pub fn uncovered(&self) -> BigRational {
        let t = BigInt::from(self.t);
        let r = self.r as u32;
        BigRational::new((&t - 1u32).pow(r), t.pow(r) * BigInt::from(self.m))
    }
}

/// `θ` with the bound `max(θ, 0)/r` it guarantees for some index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaBound {
    #[serde(with = "rational_str")]
    pub theta: BigRational,
    pub bound: ExactDensity,
    /// `θ ≤ 0`: the bound carries no information.
    pub vacuous: bool,
}

impl ThetaBound {
    fn new(theta: BigRational, r: u64) -> Self {
        let vacuous = !theta.is_positive();
        let bound = if vacuous {
            ExactDensity::zero()
        } else {
            let b = &theta / BigRational::from_integer(r.into());
            ExactDensity::new(b).expect("θ/r is within [0, 1]")
        };
        ThetaBound { theta, bound, vacuous }
    }
}

/// Upper bound for the density of `A ∪ B`: `min(dA + dB, 1)`.
pub fn union_upper_bound(d_a: &ExactDensity, d_b: &ExactDensity) -> ExactDensity {
    let sum = d_a.value() + d_b.value();
    if sum > BigRational::one() {
        ExactDensity::one()
    } else {
        ExactDensity::new(sum).expect("sum of densities is nonnegative")
    }
}

/// If a union of `r` sets has upper density `ε`, one of them has upper
/// density at least `ε/r`.
pub fn pigeonhole_threshold(epsilon: &ExactDensity, r: u64) -> Result<ExactDensity, CalculusError> {
    if epsilon.is_zero() {
        return Err(CalculusError::Degenerate("epsilon must be positive".into()));
    }
    if r == 0 {
        return Err(CalculusError::Degenerate("r must be positive".into()));
    }
    Ok(ExactDensity::new(epsilon.value() / BigRational::from_integer(r.into())).unwrap())
}

fn check_contained(name: &str, d: &ExactDensity, d_c: &ExactDensity) -> Result<(), CalculusError> {
    if d > d_c {
        return Err(CalculusError::Containment(format!(
            "d({name}) = {d} exceeds d(C) = {d_c}"
        )));
    }
    Ok(())
}

/// For `A, B ⊆ C`: `d̄(A ∩ B) ≥ max(dA + dB - dC, 0)`.
pub fn intersection_lower_bound(
    d_a: &ExactDensity,
    d_b: &ExactDensity,
    d_c: &ExactDensity,
) -> Result<ExactDensity, CalculusError> {
    check_contained("A", d_a, d_c)?;
    check_contained("B", d_b, d_c)?;
    let v = d_a.value() + d_b.value() - d_c.value();
    Ok(if v.is_positive() {
        ExactDensity::new(v).expect("bounded by dA")
    } else {
        ExactDensity::zero()
    })
}

/// For `A_0, A_1, …, A_r ⊆ C`: with `θ = d(A_0) + d(A_1 ∪ ⋯ ∪ A_r) - d(C)`,
/// some `i` has `d̄(A_0 ∩ A_i) ≥ θ/r`.
pub fn selection_lower_bound(
    d_a0: &ExactDensity,
    d_union: &ExactDensity,
    d_c: &ExactDensity,
    r: u64,
) -> Result<ThetaBound, CalculusError> {
    check_contained("A_0", d_a0, d_c)?;
    check_contained("A_1 ∪ ⋯ ∪ A_r", d_union, d_c)?;
    if r == 0 {
        return Err(CalculusError::Degenerate("r must be positive".into()));
    }
    let theta = d_a0.value() + d_union.value() - d_c.value();
    Ok(ThetaBound::new(theta, r))
}

/// Bitmask of a set of 1-based indices.
pub fn subset_mask(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

/// `Σ_{∅ ≠ S ⊆ {1..r}} (-1)^(|S|-1) d(∩_{i∈S} A_i)`, keyed by index bitmask.
pub fn inclusion_exclusion_density(
    r: usize,
    intersections: &BTreeMap<u32, ExactDensity>,
) -> Result<ExactDensity, CalculusError> {
    if r == 0 || r > 20 {
        return Err(CalculusError::Degenerate(format!("r = {r} must lie in [1, 20]")));
    }
    let full = 1u32 << r;
    let get = |mask: u32| {
        intersections
            .get(&mask)
            .ok_or_else(|| CalculusError::MissingSubset(mask_indices(mask)))
    };
    let mut total = BigRational::zero();
    for mask in 1..full {
        let d = get(mask)?;
        for bit in 0..r {
            let smaller = mask & !(1 << bit);
            if smaller != mask && smaller != 0 && d > get(smaller)? {
                return Err(CalculusError::Inconsistent(format!(
                    "d{:?} = {d} exceeds d{:?} = {}",
                    mask_indices(mask),
                    mask_indices(smaller),
                    get(smaller)?
                )));
            }
        }
        if mask.count_ones() % 2 == 1 {
            total += d.value();
        } else {
            total -= d.value();
        }
    }
    ExactDensity::new(total.clone()).map_err(|_| {
        CalculusError::Inconsistent(format!(
            "inclusion-exclusion gives {}, outside [0, 1]",
            rational_to_string(&total)
        ))
    })
}

/// Result of evaluating both sides of the partial-zeta inclusion-exclusion
/// identity on explicit finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub equal: bool,
    #[serde(with = "rational_str")]
    pub lhs: BigRational,
    #[serde(with = "rational_str")]
    pub rhs: BigRational,
    #[serde(with = "rational_str")]
    pub residual: BigRational,
}

/// Compares `ξ_{A_1 ∪ ⋯ ∪ A_r}(s)` with the alternating sum of `ξ` over all
/// intersections, in exact rational arithmetic.
pub fn truncated_inclusion_exclusion_check(sets: &[BTreeSet<u64>], s: u32) -> IdentityCheck {
    assert!(sets.len() <= 20, "at most 20 sets");
    let union: BTreeSet<u64> = sets.iter().flatten().copied().collect();
    // common denominator D = Π p^s over the union; p^(-s) = (D / p^s) / D
    let powers: BTreeMap<u64, BigUint> = union.iter().map(|&p| (p, BigUint::from(p).pow(s))).collect();
    let denom: BigUint = powers.values().product();
    let term = |p: &u64| BigInt::from(&denom / &powers[p]);

    let lhs_num: BigInt = union.iter().map(term).sum();
    let mut rhs_num = BigInt::zero();
    for mask in 1u32..(1 << sets.len()) {
        let members = mask_indices(mask);
        let first = &sets[members[0] - 1];
        let inter_sum: BigInt = first
            .iter()
            .filter(|p| members[1..].iter().all(|&i| sets[i - 1].contains(p)))
            .map(term)
            .sum();
        if members.len() % 2 == 1 {
            rhs_num += inter_sum;
        } else {
            rhs_num -= inter_sum;
        }
    }
    let denom = BigInt::from(denom);
    let lhs = BigRational::new(lhs_num.clone(), denom.clone());
    let rhs = BigRational::new(rhs_num.clone(), denom.clone());
    let residual = BigRational::new(lhs_num - rhs_num, denom);
    IdentityCheck {
        equal: residual.is_zero(),
        lhs,
        rhs,
        residual,
    }
}

/// Density of `Spl(P_1/K) ∪ ⋯ ∪ Spl(P_r/K)`: `m⁻¹ (1 - (1 - t⁻¹)^r)`.
pub fn disjoint_union_density(spec: &TowerSpec) -> ExactDensity {
    let v = BigRational::new(BigInt::one(), spec.m.into()) - spec.uncovered();
    ExactDensity::new(v).expect("between 0 and 1/m")
}

/// Chebotarev densities of every intersection in the tower model,
/// `1/(m·t^|S|)`, keyed by index bitmask.
pub fn tower_intersection_densities(spec: &TowerSpec) -> BTreeMap<u32, ExactDensity> {
    assert!(spec.r <= 20, "table needs r ≤ 20");
    (1u32..1 << spec.r)
        .map(|mask| {
            let degree = BigInt::from(spec.m) * BigInt::from(spec.t).pow(mask.count_ones());
            let d = ExactDensity::new(BigRational::new(BigInt::one(), degree)).unwrap();
            (mask, d)
        })
        .collect()
}

/// `θ = d(S ∩ Spl(M/K)) - m⁻¹(1 - t⁻¹)^r`; some `P_i` then has
/// `d̄(S ∩ Spl(P_i/K)) ≥ θ/r`.
pub fn proposition_theta(
    d_s_spl_m: &ExactDensity,
    spec: &TowerSpec,
) -> Result<ThetaBound, CalculusError> {
    let max = BigRational::new(BigInt::one(), spec.m.into());
    if d_s_spl_m.value() > &max {
        return Err(CalculusError::Inconsistent(format!(
            "d(S ∩ Spl(M/K)) = {d_s_spl_m} exceeds d(Spl(M/K)) = 1/{}",
            spec.m
        )));
    }
    let theta = d_s_spl_m.value() - spec.uncovered();
    Ok(ThetaBound::new(theta, spec.r))
}

/// `[P_{i_1} ⋯ P_{i_ℓ} : K] = m·t^ℓ`.
pub fn compositum_degree(spec: &TowerSpec, ell: u64) -> Result<BigUint, CalculusError> {
    if ell == 0 || ell > spec.r {
        return Err(CalculusError::EllOutOfRange { ell, r: spec.r });
    }
    Ok(BigUint::from(spec.m) * BigUint::from(spec.t).pow(ell as u32))
}
