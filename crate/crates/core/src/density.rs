//! Empirical densities of prime sets.
//!
//! For `s > 1` the partial zeta function of a set `A` is
//! `ξ_A(s) = Σ_{p ∈ A} p^(-s)`, and the Dirichlet density is the limit of
//! `ξ_A(s) / log((s-1)^(-1))` as `s → 1+`. That limit is numerically out of
//! reach: truncating at a cutoff `X` loses a tail of size about
//! `E1((s-1) log X)`, which dominates near `s = 1`. The tail is added back
//! with weight equal to `A`'s share of the primes below `X`. Even then the
//! ratio carries a bias of order `1/log((s-1)^(-1))`, because
//! `ξ_A(s) = 𝔡(A)·log((s-1)^(-1)) + c_A + o(1)`. The estimate is therefore
//! the slope of the corrected `ξ_A` against `log((s-1)^(-1))` across the
//! grid, which cancels `c_A`. Natural density is the tight, fast-converging
//! proxy.
//!
//! Sums run over primes in ascending order inside each sieve segment and are
//! merged in segment order with compensated summation, so results are
//! reproducible bit for bit.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::ExactDensity;
use crate::primes::{map_segments, PrimeError, PrimeRange};
use crate::sets::PrimeSet;
use crate::splitting::{GaloisExtensionModel, SplitError};

pub const DEFAULT_S_GRID: [f64; 5] = [1.2, 1.1, 1.05, 1.02, 1.01];
pub const DEFAULT_CUTOFF: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("s = {0} is outside the domain s > 1")]
    Domain(f64),
    #[error("the s-grid is empty")]
    EmptyGrid,
    #[error("no primes below {0}; natural density is undefined")]
    NoPrimes(u64),
    #[error("density {delta} lifted by degree {degree} exceeds 1")]
    LiftExceedsOne { delta: ExactDensity, degree: u64 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Primes(#[from] PrimeError),
    #[error(transparent)]
    Split(#[from] SplitError),
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// `Σ_{p ∈ A, p < cutoff} p^(-s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialZetaValue {
    pub s: f64,
    pub cutoff: u64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Dirichlet,
    UpperDirichlet,
    Natural,
}

/// One point of a Dirichlet ratio curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub s: f64,
    /// Truncated `ξ_A(s)`.
    pub xi: f64,
    /// `ξ_A(s) / log((s-1)^(-1))` with the truncated sum.
    pub ratio: f64,
    /// The ratio after adding `A`'s proportional share of the tail beyond
    /// the cutoff.
    pub tail_corrected: f64,
    /// Slope of corrected `ξ_A` against `log((s-1)^(-1))` from the previous
    /// (larger) `s` of the grid to this one.
    pub local_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub kind: DensityKind,
    /// Clamped to `[0, 1]`.
    pub value: f64,
    pub raw_value: f64,
    pub cutoff: u64,
    /// Strictly decreasing; empty for natural density.
    pub s_grid: Vec<f64>,
    pub diagnostics: Vec<RatioPoint>,
    /// Max minus min of the local slopes the value was taken from.
    pub spread: f64,
    /// `(members, primes)` below the cutoff, natural density only.
    pub counts: Option<(u64, u64)>,
}

fn check_s(s: f64) -> Result<(), DensityError> {
    if s.is_nan() || s <= 1.0 {
        return Err(DensityError::Domain(s));
    }
    Ok(())
}

/// `E1(x) = ∫_x^∞ e^(-t)/t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    assert!(x > 0.0, "E1 needs a positive argument");
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // continued fraction, modified Lentz
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Prime-number-theorem estimate of `Σ_{p ≥ cutoff} p^(-s)`.
pub fn prime_zeta_tail(s: f64, cutoff: u64) -> f64 {
    exp_integral_e1((s - 1.0) * (cutoff as f64).ln())
}

struct ZetaScan {
    members: Vec<f64>,
    member_count: u64,
    prime_count: u64,
}

/// One pass computing `ξ_A(s)` below `cutoff` at every `s`, with the
/// member and prime counts.
fn scan_zeta<S: PrimeSet>(set: &S, grid: &[f64], cutoff: u64) -> Result<ZetaScan, DensityError> {
    let per_segment = map_segments(&PrimeRange::below(cutoff), |primes| {
        let mut members = vec![CompensatedSum::default(); grid.len()];
        let mut count = 0u64;
        for &p in primes {
            if !set.contains(p)? {
                continue;
            }
            count += 1;
            let lp = (p as f64).ln();
            for (k, &s) in grid.iter().enumerate() {
                members[k].add((-s * lp).exp());
            }
        }
        Ok::<_, SplitError>((members, count, primes.len() as u64))
    })?;
    let mut members = vec![CompensatedSum::default(); grid.len()];
    let (mut member_count, mut prime_count) = (0, 0);
    for seg in per_segment {
        let (m, count, total) = seg?;
        for (acc, part) in members.iter_mut().zip(&m) {
            acc.merge(part);
        }
        member_count += count;
        prime_count += total;
    }
    Ok(ZetaScan {
        members: members.iter().map(CompensatedSum::value).collect(),
        member_count,
        prime_count,
    })
}

pub fn partial_zeta<S: PrimeSet>(set: &S, s: f64, cutoff: u64) -> Result<PartialZetaValue, DensityError> {
    check_s(s)?;
    let scan = scan_zeta(set, &[s], cutoff)?;
    Ok(PartialZetaValue {
        s,
        cutoff,
        value: scan.members[0],
    })
}

/// `Σ p^(-s)` over the given primes as an exact rational.
pub fn exact_prime_zeta(primes: &[u64], s: u32) -> BigRational {
    if primes.is_empty() {
        return BigRational::zero();
    }
    let powers: Vec<BigUint> = primes.iter().map(|&p| BigUint::from(p).pow(s)).collect();
    let denom: BigUint = powers.iter().product();
    let numer: BigUint = powers.iter().map(|q| &denom / q).sum();
    BigRational::new(numer.into(), denom.into())
}

/// Exact `ξ_A(s)` below `cutoff` for integer `s ≥ 2`.
pub fn partial_zeta_exact<S: PrimeSet>(set: &S, s: u32, cutoff: u64) -> Result<BigRational, DensityError> {
    if s < 2 {
        return Err(DensityError::Domain(s as f64));
    }
    let members = map_segments(&PrimeRange::below(cutoff), |primes| {
        let mut out = Vec::new();
        for &p in primes {
            if set.contains(p)? {
                out.push(p);
            }
        }
        Ok::<_, SplitError>(out)
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?
    .concat();
    Ok(exact_prime_zeta(&members, s))
}

fn normalize_grid(grid: &[f64]) -> Result<Vec<f64>, DensityError> {
    if grid.is_empty() {
        return Err(DensityError::EmptyGrid);
    }
    for &s in grid {
        check_s(s)?;
    }
    let mut g = grid.to_vec();
    g.sort_by(|a, b| b.total_cmp(a));
    g.dedup();
    Ok(g)
}

fn ratio_curve<S: PrimeSet>(set: &S, grid: &[f64], cutoff: u64) -> Result<Vec<RatioPoint>, DensityError> {
    let scan = scan_zeta(set, grid, cutoff)?;
    let share = if scan.prime_count > 0 {
        scan.member_count as f64 / scan.prime_count as f64
    } else {
        0.0
    };
    let mut prev: Option<(f64, f64)> = None;
    Ok(grid
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let log_pole = (1.0 / (s - 1.0)).ln();
            let xi = scan.members[k];
            let corrected = xi + share * prime_zeta_tail(s, cutoff.max(2));
            let local_slope = prev.map(|(l0, x0)| (corrected - x0) / (log_pole - l0));
            prev = Some((log_pole, corrected));
            RatioPoint {
                s,
                xi,
                ratio: xi / log_pole,
                tail_corrected: corrected / log_pole,
                local_slope,
            }
        })
        .collect())
}

fn corrected_xi(pt: &RatioPoint) -> f64 {
    pt.tail_corrected * (1.0 / (pt.s - 1.0)).ln()
}

/// Estimate of the Dirichlet density: the secant slope of corrected `ξ_A`
/// against `log((s-1)^(-1))` across the half of the grid closest to `s = 1`,
/// or the corrected ratio when that half is a single point. The whole curve
/// is kept in `diagnostics`.
pub fn dirichlet_density_estimate<S: PrimeSet>(
    set: &S,
    s_grid: &[f64],
    cutoff: u64,
) -> Result<DensityEstimate, DensityError> {
    let grid = normalize_grid(s_grid)?;
    let curve = ratio_curve(set, &grid, cutoff)?;
    let tail = &curve[curve.len() / 2..];
    let (first, last) = (tail.first().unwrap(), tail.last().unwrap());
    let raw = if tail.len() == 1 {
        last.tail_corrected
    } else {
        let dl = (1.0 / (last.s - 1.0)).ln() - (1.0 / (first.s - 1.0)).ln();
        (corrected_xi(last) - corrected_xi(first)) / dl
    };
    let spread = spread(tail);
    Ok(DensityEstimate {
        kind: DensityKind::Dirichlet,
        value: raw.clamp(0.0, 1.0),
        raw_value: raw,
        cutoff,
        s_grid: grid,
        spread,
        diagnostics: curve,
        counts: None,
    })
}

fn spread(points: &[RatioPoint]) -> f64 {
    // the first point's slope reaches outside `points`
    let slopes = points.iter().skip(1).filter_map(|pt| pt.local_slope);
    let (lo, hi) = slopes.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Estimator of the upper density: the largest local slope over the half of
/// the grid closest to `s = 1`. The Dirichlet estimate is a weighted mean of
/// the same slopes, so the two differ by at most the spread. A limsup is not computable from
/// truncations; this is a documented stand-in.
pub fn upper_density_estimate<S: PrimeSet>(
    set: &S,
    s_grid: &[f64],
    cutoff: u64,
) -> Result<DensityEstimate, DensityError> {
    let grid = normalize_grid(s_grid)?;
    let curve = ratio_curve(set, &grid, cutoff)?;
    let tail = &curve[curve.len() / 2..];
    let raw = if tail.len() == 1 {
        tail[0].tail_corrected
    } else {
        tail[1..]
            .iter()
            .filter_map(|pt| pt.local_slope)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let spread = spread(tail);
    Ok(DensityEstimate {
        kind: DensityKind::UpperDirichlet,
        value: raw.clamp(0.0, 1.0),
        raw_value: raw,
        cutoff,
        s_grid: grid,
        spread,
        diagnostics: curve,
        counts: None,
    })
}

pub fn natural_counts<S: PrimeSet>(set: &S, cutoffs: &[u64]) -> Result<Vec<(u64, u64)>, DensityError> {
    let Some(&max) = cutoffs.iter().max() else {
        return Ok(Vec::new());
    };
    let per_segment = map_segments(&PrimeRange::below(max), |primes| {
        let mut counts = vec![(0u64, 0u64); cutoffs.len()];
        for &p in primes {
            let member = set.contains(p)?;
            for (k, &x) in cutoffs.iter().enumerate() {
                if p < x {
                    counts[k].1 += 1;
                    if member {
                        counts[k].0 += 1;
                    }
                }
            }
        }
        Ok::<_, SplitError>(counts)
    })?;
    let mut total = vec![(0u64, 0u64); cutoffs.len()];
    for seg in per_segment {
        for (acc, c) in total.iter_mut().zip(seg?) {
            acc.0 += c.0;
            acc.1 += c.1;
        }
    }
    Ok(total)
}

fn natural_from_counts(cutoff: u64, (members, primes): (u64, u64)) -> Result<DensityEstimate, DensityError> {
    if primes == 0 {
        return Err(DensityError::NoPrimes(cutoff));
    }
    let value = members as f64 / primes as f64;
    Ok(DensityEstimate {
        kind: DensityKind::Natural,
        value,
        raw_value: value,
        cutoff,
        s_grid: Vec::new(),
        diagnostics: Vec::new(),
        spread: 0.0,
        counts: Some((members, primes)),
    })
}

/// `#{p ∈ A : p < X} / #{p : p < X}`.
pub fn natural_density_estimate<S: PrimeSet>(set: &S, cutoff: u64) -> Result<DensityEstimate, DensityError> {
    let counts = natural_counts(set, &[cutoff])?;
    natural_from_counts(cutoff, counts[0])
}

/// Natural density at several cutoffs from a single scan.
pub fn natural_density_curve<S: PrimeSet>(
    set: &S,
    cutoffs: &[u64],
) -> Result<Vec<DensityEstimate>, DensityError> {
    natural_counts(set, cutoffs)?
        .into_iter()
        .zip(cutoffs)
        .map(|(c, &x)| natural_from_counts(x, c))
        .collect()
}

/// `𝔡(Spl(L/ℚ)) = 1/[L:ℚ]`.
pub fn chebotarev_reference(model: &GaloisExtensionModel) -> ExactDensity {
    ExactDensity::reciprocal(model.degree())
}

/// Density of the primes above a set after passing to an extension of the
/// given degree in which all of them split: `[P:K] · 𝔡_K(S₀)`.
pub fn lift_density(delta: &ExactDensity, degree: u64) -> Result<ExactDensity, DensityError> {
    if degree == 0 {
        return Err(DensityError::ZeroDegree);
    }
    let lifted = delta.value() * BigRational::from_integer(degree.into());
    if lifted > BigRational::one() {
        return Err(DensityError::LiftExceedsOne {
            delta: delta.clone(),
            degree,
        });
    }
    Ok(ExactDensity::new(lifted).expect("nonnegative and at most one"))
}

/// A row of a Dirichlet convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cutoff: u64,
    pub s: f64,
    pub xi: f64,
    pub ratio: f64,
    pub tail_corrected: f64,
    pub local_slope: Option<f64>,
    pub reference: Option<ExactDensity>,
}

pub fn dirichlet_convergence_table<S: PrimeSet>(
    set: &S,
    cutoffs: &[u64],
    s_grid: &[f64],
    reference: Option<&ExactDensity>,
) -> Result<Vec<ConvergenceRow>, DensityError> {
    let grid = normalize_grid(s_grid)?;
    let mut rows = Vec::new();
    for &cutoff in cutoffs {
        for pt in ratio_curve(set, &grid, cutoff)? {
            rows.push(ConvergenceRow {
                cutoff,
                s: pt.s,
                xi: pt.xi,
                ratio: pt.ratio,
                tail_corrected: pt.tail_corrected,
                local_slope: pt.local_slope,
                reference: reference.cloned(),
            });
        }
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("cutoff,s,xi,ratio,tail_corrected,local_slope,reference\n");
    for r in rows {
        let reference = r.reference.as_ref().map(|d| d.to_string()).unwrap_or_default();
        let slope = r.local_slope.map(|x| format!("{x:.10}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{:.10},{:.10},{:.10},{},{}",
            r.cutoff, r.s, r.xi, r.ratio, r.tail_corrected, slope, reference
        )
        .unwrap();
    }
    out
}
