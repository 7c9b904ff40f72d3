//! Explicit constants: the choice of `r`, `ν(δ) = (⌊δ⁻¹⌋ + 1)!`,
//! `φ(δ, d) = ν(δ)^d · ρ(d)`, and the report that chains them for a root
//! system type and a base density `ω`.
//!
//! `φ` is super-decreasing: `δ₁ ≤ δ₂` gives `⌊δ₂⁻¹⌋ ≤ ⌊δ₁⁻¹⌋`, so `ν(δ₂)`
//! divides `ν(δ₁)` and the same holds after raising to the `d`-th power and
//! multiplying by the common factor `ρ(d)`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::calculus::{proposition_theta, CalculusError, TowerSpec};
use crate::exact::ExactDensity;
use crate::weyl::{constants_for_group, RootSystemType};

/// Default limit, in decimal digits, for materializing `n` exactly.
pub const DEFAULT_MATERIALIZE_LIMIT: u64 = 100_000;

/// Largest `(t-1)^r` (in bits) evaluated exactly when choosing `r`.
pub const EXACT_POWER_BIT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("hypothesis failure: ω = 0, but the construction requires 𝔡_K(S∩Spl(M/K)) > 0")]
    HypothesisFailure,
    #[error("ω = {omega} exceeds 𝔡_K(Spl(M/K)) = 1/{m}")]
    OmegaExceedsMax { omega: ExactDensity, m: u64 },
    #[error("δ = {0} is outside (0, 1]")]
    Domain(ExactDensity),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

pub(crate) fn biguint_str<S: Serializer>(v: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(v)
}

fn opt_biguint_str<S: Serializer>(v: &Option<BigUint>, serializer: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => serializer.collect_str(x),
        None => serializer.serialize_none(),
    }
}

fn uncovered_below_half_omega(m: u64, t: u64, omega: &BigRational, r: u64) -> bool {
    // m⁻¹(1 - t⁻¹)^r < ω/2  ⇔  2·(t-1)^r·den(ω) < num(ω)·m·t^r
    let r = r as u32;
    let t = BigInt::from(t);
    let lhs = BigInt::from(2u32) * (&t - 1u32).pow(r) * omega.denom();
    let rhs = omega.numer() * BigInt::from(m) * t.pow(r);
    lhs < rhs
}

/// Smallest `r ≥ 1` with `m⁻¹(1 - t⁻¹)^r < ω/2`, decided by exact integer
/// comparison. A floating-point estimate only picks the starting point.
pub fn choose_r(m: u64, t: u64, omega: &ExactDensity) -> Result<u64, BoundsError> {
    if m == 0 {
        return Err(BoundsError::InvalidArgument("m must be positive".into()));
    }
    if t < 2 {
        return Err(BoundsError::InvalidArgument("t must be at least 2".into()));
    }
    if omega.is_zero() {
        return Err(BoundsError::HypothesisFailure);
    }
    let w = omega.value();
    if w * BigRational::from_integer(m.into()) > BigRational::one() {
        return Err(BoundsError::OmegaExceedsMax {
            omega: omega.clone(),
            m,
        });
    }
    // r ≈ log(2/(mω)) / -log(1 - 1/t)
    let target = (2.0 / (m as f64 * omega.to_f64())).ln();
    let step = -(-1.0 / t as f64).ln_1p();
    let estimate = (target / step).ceil();
    if !estimate.is_finite() || estimate * (t as f64).log2() > EXACT_POWER_BIT_BUDGET as f64 {
        return Err(BoundsError::ResourceLimit(format!(
            "choosing r needs (t-1)^r with t = {t}, r ≈ {estimate:.3e}; beyond the exact-arithmetic budget"
        )));
    }
    let mut r = (estimate as u64).max(1);
    while !uncovered_below_half_omega(m, t, w, r) {
        r += 1;
    }
    while r > 1 && uncovered_below_half_omega(m, t, w, r - 1) {
        r -= 1;
    }
    Ok(r)
}

fn check_delta(delta: &ExactDensity) -> Result<(), BoundsError> {
    if delta.is_zero() {
        return Err(BoundsError::Domain(delta.clone()));
    }
    Ok(())
}

/// `⌊δ⁻¹⌋`, which bounds the idele index `[𝕀_{P,S̄} : cl(P^×)]`.
pub fn idele_index_bound(delta: &ExactDensity) -> Result<u64, BoundsError> {
    check_delta(delta)?;
    let q = delta.value().denom() / delta.value().numer();
    q.to_u64()
        .ok_or_else(|| BoundsError::ResourceLimit(format!("⌊1/δ⌋ = {q} does not fit in 64 bits")))
}

/// `⌊δ⁻¹⌋ + 1`, the argument of the factorial in `ν(δ)`.
pub fn nu_arg(delta: &ExactDensity) -> Result<u64, BoundsError> {
    Ok(idele_index_bound(delta)? + 1)
}

fn product_range(lo: u64, hi: u64) -> BigUint {
    // product of lo..=hi by binary splitting
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).map(BigUint::from).product();
    }
    let mid = lo + (hi - lo) / 2;
    product_range(lo, mid) * product_range(mid + 1, hi)
}

fn factorial_cache() -> &'static RwLock<HashMap<u64, Arc<BigUint>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<BigUint>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `k!`, memoized per `k`.
pub fn factorial(k: u64) -> Arc<BigUint> {
    if let Some(v) = factorial_cache().read().unwrap().get(&k) {
        return Arc::clone(v);
    }
    let v = Arc::new(product_range(2, k));
    factorial_cache()
        .write()
        .unwrap()
        .entry(k)
        .or_insert(v)
        .clone()
}

/// `ν(δ) = (⌊δ⁻¹⌋ + 1)!`.
pub fn nu(delta: &ExactDensity) -> Result<BigUint, BoundsError> {
    Ok((*factorial(nu_arg(delta)?)).clone())
}

/// `log10(k!)`: direct sum for small `k`, Stirling series above.
pub fn log10_factorial(k: u64) -> f64 {
    if k < 1000 {
        return (2..=k).map(|i| (i as f64).log10()).sum();
    }
    let x = k as f64;
    let ln = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3));
    ln / std::f64::consts::LN_10
}

fn log10_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log10();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log10() + shift as f64 * std::f64::consts::LOG10_2
}

/// `(k!)^power · times`, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    pub factorial_of: u64,
    pub power: u32,
    #[serde(serialize_with = "biguint_str")]
    pub times: BigUint,
}

impl FactoredInteger {
    pub fn log10_estimate(&self) -> f64 {
        self.power as f64 * log10_factorial(self.factorial_of) + log10_biguint(&self.times)
    }

    pub fn digits_estimate(&self) -> u64 {
        self.log10_estimate().floor() as u64 + 1
    }

    pub fn materialize(&self) -> BigUint {
        factorial(self.factorial_of).pow(self.power) * &self.times
    }
}

/// `{"factored": {...}}` wrapper used in JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factored {
    pub factored: FactoredInteger,
}

/// `φ(δ, d)` with its size and, when small enough, its exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiValue {
    pub factored: FactoredInteger,
    pub digits: u64,
    /// `false` when `digits` is a Stirling estimate.
    pub digits_exact: bool,
    #[serde(serialize_with = "opt_biguint_str")]
    pub exact: Option<BigUint>,
}

/// `φ(δ, d) = ν(δ)^d · ρ(d)`, materialized when it has at most
/// `materialize_limit` decimal digits.
pub fn phi(
    delta: &ExactDensity,
    d: u32,
    rho: &BigUint,
    materialize_limit: u64,
) -> Result<PhiValue, BoundsError> {
    if d == 0 {
        return Err(BoundsError::InvalidArgument("d must be positive".into()));
    }
    if rho.is_zero() {
        return Err(BoundsError::InvalidArgument("ρ must be positive".into()));
    }
    let factored = FactoredInteger {
        factorial_of: nu_arg(delta)?,
        power: d,
        times: rho.clone(),
    };
    let estimate = factored.digits_estimate();
    if estimate > materialize_limit.saturating_add(1) {
        return Ok(PhiValue {
            factored,
            digits: estimate,
            digits_exact: false,
            exact: None,
        });
    }
    let value = factored.materialize();
    let digits = value.to_string().len() as u64;
    Ok(PhiValue {
        factored,
        digits,
        digits_exact: true,
        exact: (digits <= materialize_limit).then_some(value),
    })
}

/// Where `ω` came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaProvenance {
    Supplied,
    Chebotarev { model: String },
    Empirical { cutoff: u64 },
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// `None` means ρ(d) was not supplied and defaults to 1.
    pub rho: Option<BigUint>,
    pub materialize_limit: u64,
    pub provenance: OmegaProvenance,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            rho: None,
            materialize_limit: DEFAULT_MATERIALIZE_LIMIT,
            provenance: OmegaProvenance::Supplied,
        }
    }
}

pub const RHO_WARNING: &str =
    "rho(d) is only known to exist; defaulted to 1, so n is exact only up to the factor rho(d)";

/// Every constant of the construction for one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(rename = "type")]
    pub ty: RootSystemType,
    pub m: u64,
    pub t: u64,
    pub omega: ExactDensity,
    pub omega_provenance: OmegaProvenance,
    pub r: u64,
    pub theta: ExactDensity,
    pub delta: ExactDensity,
    pub nu_arg: u64,
    #[serde(serialize_with = "biguint_str")]
    pub rho: BigUint,
    pub n_factored: Factored,
    pub n_digits: u64,
    pub n_digits_exact: bool,
    #[serde(serialize_with = "opt_biguint_str")]
    pub n_exact: Option<BigUint>,
    pub d: usize,
    pub c: u64,
    /// `c·r`, the number of auxiliary valuations the construction consumes.
    pub valuation_budget: u64,
    pub idele_index_bound: u64,
    pub warnings: Vec<String>,
}

/// Runs the whole chain: `t = |W|`, `r` minimal with
/// `m⁻¹(1 - t⁻¹)^r < ω/2`, `θ`, `δ = ω/(2r)` and `n = φ(δ, d)`.
pub fn csp_bound_pipeline(
    ty: RootSystemType,
    m: u64,
    omega: &ExactDensity,
    options: &PipelineOptions,
) -> Result<BoundReport, BoundsError> {
    let constants = constants_for_group(ty);
    let t = constants.t_u64().ok_or_else(|| {
        BoundsError::ResourceLimit(format!("|W({ty})| = {} does not fit in 64 bits", constants.t))
    })?;
    let r = choose_r(m, t, omega)?;
    let spec = TowerSpec::new(m, t, r)?;
    let theta = proposition_theta(omega, &spec)?;
    let half_omega = omega.value() / BigRational::from_integer(2.into());
    if theta.theta <= half_omega {
        return Err(BoundsError::InvariantViolation(format!(
            "θ = {} is not greater than ω/2",
            crate::exact::rational_to_string(&theta.theta)
        )));
    }
    let delta_value = omega.value() / BigRational::from_integer((2 * r).into());
    let delta = ExactDensity::new(delta_value).expect("ω/(2r) lies in (0, 1]");
    let mut warnings = Vec::new();
    let rho = match &options.rho {
        Some(rho) => rho.clone(),
        None => {
            warnings.push(RHO_WARNING.to_string());
            BigUint::one()
        }
    };
    let d = u32::try_from(constants.d).expect("rank fits in u32");
    let n = phi(&delta, d, &rho, options.materialize_limit)?;
    let valuation_budget = constants.c.checked_mul(r).ok_or_else(|| {
        BoundsError::ResourceLimit("c·r does not fit in 64 bits".into())
    })?;
    Ok(BoundReport {
        ty,
        m,
        t,
        omega: omega.clone(),
        omega_provenance: options.provenance.clone(),
        r,
        theta: ExactDensity::new(theta.theta).expect("ω/2 < θ ≤ ω"),
        idele_index_bound: idele_index_bound(&delta)?,
        nu_arg: n.factored.factorial_of,
        delta,
        rho,
        n_factored: Factored {
            factored: n.factored,
        },
        n_digits: n.digits,
        n_digits_exact: n.digits_exact,
        n_exact: n.exact,
        d: constants.d,
        c: constants.c,
        valuation_budget,
        warnings,
    })
}
