//! Closed-form upper bounds on `P(|X̄ - p| > eps)` for the mean of `n`
//! Bernoulli(p) draws.
//!
//! Most families have the shape `alpha * exp(-beta * eps^2 * n)`:
//!
//! | family              | alpha          | beta            |
//! |---------------------|----------------|-----------------|
//! | Uspensky            | 2              | 1/2             |
//! | Hoeffding           | 2              | 2               |
//! | BernoulliSharp      | 1              | 2               |
//! | GeneralDiscrete     | 1              | 2/(1+eps^2)     |
//! | ContinuousCorrected | exp(eps·φ)     | 2/(1+eps^2)     |
//!
//! Evaluators accept any `(n, eps)` and tag the result with a [`Regime`]:
//! `Certified` when the parameters sit where the inequality is known to
//! hold, `Heuristic` otherwise. Values above one are returned as is.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{domain, regime, Error, Result};
use crate::exact_binomial::rational::ratio_to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    ClassicalBernoulli,
    Uspensky,
    Hoeffding,
    BernoulliSharp,
    GeneralDiscrete,
    ContinuousCorrected,
    OneSidedHalf,
    NormalizedAsymptotic,
}

impl BoundFamily {
    pub const ALL: [BoundFamily; 8] = [
        BoundFamily::ClassicalBernoulli,
        BoundFamily::Uspensky,
        BoundFamily::Hoeffding,
        BoundFamily::BernoulliSharp,
        BoundFamily::GeneralDiscrete,
        BoundFamily::ContinuousCorrected,
        BoundFamily::OneSidedHalf,
        BoundFamily::NormalizedAsymptotic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::ClassicalBernoulli => "classical-bernoulli",
            BoundFamily::Uspensky => "uspensky",
            BoundFamily::Hoeffding => "hoeffding",
            BoundFamily::BernoulliSharp => "bernoulli-sharp",
            BoundFamily::GeneralDiscrete => "general-discrete",
            BoundFamily::ContinuousCorrected => "continuous",
            BoundFamily::OneSidedHalf => "one-sided",
            BoundFamily::NormalizedAsymptotic => "normalized",
        }
    }
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s {
            "classical-bernoulli" | "classical" => BoundFamily::ClassicalBernoulli,
            "uspensky" => BoundFamily::Uspensky,
            "hoeffding" => BoundFamily::Hoeffding,
            "bernoulli-sharp" | "sharp" => BoundFamily::BernoulliSharp,
            "general-discrete" => BoundFamily::GeneralDiscrete,
            "continuous" | "continuous-corrected" => BoundFamily::ContinuousCorrected,
            "one-sided" | "one-sided-half" => BoundFamily::OneSidedHalf,
            "normalized" | "normalized-asymptotic" => BoundFamily::NormalizedAsymptotic,
            _ => {
                return Err(Error::Parse {
                    input: s.into(),
                    reason: "unknown bound family".into(),
                })
            }
        };
        Ok(family)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Certified,
    Heuristic,
}

impl Regime {
    fn from_flag(certified: bool) -> Self {
        if certified {
            Regime::Certified
        } else {
            Regime::Heuristic
        }
    }

    pub fn is_certified(&self) -> bool {
        *self == Regime::Certified
    }
}

/// An evaluated bound. For the α/β families `value = alpha * exp(-beta eps^2 n)`.
/// The classical bound has no such structure and reports `alpha = value`,
/// `beta = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub family: BoundFamily,
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub regime: Regime,
}

impl BoundValue {
    fn exponential(family: BoundFamily, alpha: f64, beta: f64, n: u64, eps: f64, regime: Regime) -> Self {
        Self {
            family,
            alpha,
            beta,
            value: alpha * (-beta * eps * eps * n as f64).exp(),
            regime,
        }
    }
}

fn near_integer(x: f64) -> Option<u64> {
    let r = x.round();
    if r >= 0.0 && (x - r).abs() <= 1e-9 * r.max(1.0) {
        Some(r as u64)
    } else {
        None
    }
}

/// `eps = 1/d` with `d >= 2` dividing `n` (and `p d` integral, if `p` is known).
fn on_bernoulli_lattice(n: u64, eps: f64, p: Option<f64>) -> bool {
    if !(eps > 0.0) {
        return false;
    }
    let Some(d) = near_integer(1.0 / eps) else {
        return false;
    };
    if d < 2 || !n.is_multiple_of(d) {
        return false;
    }
    match p {
        None => true,
        Some(p) => matches!(near_integer(p * d as f64), Some(r) if r >= 1 && r < d),
    }
}

/// `eps = k/n` with `2 <= k < n` (and `p = m/n`, `0 < m < n`, if `p` is known).
fn on_discrete_lattice(n: u64, eps: f64, p: Option<f64>) -> bool {
    let Some(k) = near_integer(eps * n as f64) else {
        return false;
    };
    if k < 2 || k >= n {
        return false;
    }
    match p {
        None => true,
        Some(p) => matches!(near_integer(p * n as f64), Some(m) if m >= 1 && m < n),
    }
}

/// Parameters of the classical bound `1/(1+C)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalBoundParams {
    #[serde(serialize_with = "serialize_ratio")]
    pub xi1: BigRational,
    #[serde(serialize_with = "serialize_ratio")]
    pub xi2: BigRational,
    /// `(1/(s-1)) ((r+1)/r)^xi1`.
    pub branch1: f64,
    /// `(1/(r-1)) ((s+1)/s)^xi2`.
    pub branch2: f64,
    pub c: f64,
    /// `C` with both exponents replaced by `n eps^2 = k/(r+s)`.
    pub c_simplified: f64,
    /// `1/(1 + c_simplified)`, never smaller than the sharp value.
    pub value_simplified: f64,
}

fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn classical_bernoulli_bound(k: u64, r: u64, s: u64) -> Result<(ClassicalBoundParams, BoundValue)> {
    if k == 0 {
        return Err(domain("classical bound needs k >= 1"));
    }
    if r < 2 {
        return Err(domain("classical bound needs r >= 2: the factor 1/(r-1) vanishes"));
    }
    if s < 2 {
        return Err(domain("classical bound needs s >= 2: the factor 1/(s-1) vanishes"));
    }
    let big = |x: u64| BigInt::from(x);
    let xi1 = BigRational::new(big(k * (r + 1) + s), big(r + s + 1));
    let xi2 = BigRational::new(big(k * (s + 1) + r), big(r + s + 1));
    let (rf, sf) = (r as f64, s as f64);
    let branches = |e1: f64, e2: f64| {
        (
            (e1 * ((rf + 1.0) / rf).ln()).exp() / (sf - 1.0),
            (e2 * ((sf + 1.0) / sf).ln()).exp() / (rf - 1.0),
        )
    };
    let (branch1, branch2) = branches(ratio_to_f64(&xi1), ratio_to_f64(&xi2));
    let c = branch1.min(branch2);
    let ne2 = k as f64 / (rf + sf);
    let (s1, s2) = branches(ne2, ne2);
    let c_simplified = s1.min(s2);
    let value = 1.0 / (1.0 + c);
    let params = ClassicalBoundParams {
        xi1,
        xi2,
        branch1,
        branch2,
        c,
        c_simplified,
        value_simplified: 1.0 / (1.0 + c_simplified),
    };
    let bound = BoundValue {
        family: BoundFamily::ClassicalBernoulli,
        alpha: value,
        beta: 0.0,
        value,
        regime: Regime::Certified,
    };
    Ok((params, bound))
}

/// `2 exp(-eps^2 n / 2)`.
pub fn uspensky_bound(n: u64, eps: f64) -> BoundValue {
    BoundValue::exponential(BoundFamily::Uspensky, 2.0, 0.5, n, eps, Regime::Certified)
}

/// `2 exp(-2 eps^2 n)`.
pub fn hoeffding_bound(n: u64, eps: f64) -> BoundValue {
    BoundValue::exponential(BoundFamily::Hoeffding, 2.0, 2.0, n, eps, Regime::Certified)
}

/// `exp(-2 eps^2 n)`, certified on Bernoulli lattices `eps = 1/(r+s)`, `n = k(r+s)`.
pub fn bernoulli_sharp_bound(n: u64, eps: f64) -> BoundValue {
    let regime = Regime::from_flag(on_bernoulli_lattice(n, eps, None));
    BoundValue::exponential(BoundFamily::BernoulliSharp, 1.0, 2.0, n, eps, regime)
}

/// `exp(-2 eps^2 n / (1 + eps^2))`, certified for `eps = k/n` with `2 <= k < n`.
pub fn general_discrete_bound(n: u64, eps: f64) -> BoundValue {
    let regime = Regime::from_flag(on_discrete_lattice(n, eps, None));
    let beta = 2.0 / (1.0 + eps * eps);
    BoundValue::exponential(BoundFamily::GeneralDiscrete, 1.0, beta, n, eps, regime)
}

/// Continuous-case correction exponent φ(n, eps); needs `n eps > 1`.
pub fn phi_correction(n: u64, eps: f64) -> Result<f64> {
    let nf = n as f64;
    let ne = nf * eps;
    if !(ne > 1.0) {
        return Err(regime("n eps > 1", format!("n eps = {ne}")));
    }
    let e2 = eps * eps;
    let numer = ne * (1.0 + e2) / (ne - 1.0) + eps * (2.0 + 6.0 * eps + 9.0 / (2.0 * nf));
    let denom = (1.0 + e2) * (1.0 + e2 + (1.0 + 3.0 * eps + 9.0 / (4.0 * nf)) / nf);
    Ok(numer / denom)
}

/// Multiplier `exp(eps φ(n, eps))` of the continuous bound.
pub fn correction_factor(n: u64, eps: f64) -> Result<f64> {
    Ok((eps * phi_correction(n, eps)?).exp())
}

/// `exp(eps φ(n, eps) - 2 eps^2 n / (1 + eps^2))` for arbitrary real `p`, `eps`
/// with `0 < p < 1` and `1/n < eps <= min(p, 1-p)`.
pub fn continuous_bound(n: u64, p: f64, eps: f64) -> Result<BoundValue> {
    if !(p > 0.0 && p < 1.0) {
        return Err(regime("0 < p < 1", format!("p = {p}")));
    }
    if !(eps * n as f64 > 1.0) {
        return Err(regime(
            "1/n < eps <= min(p, 1-p)",
            format!("eps = {eps} is not above 1/n = {}", 1.0 / n as f64),
        ));
    }
    let limit = p.min(1.0 - p);
    if eps > limit {
        return Err(regime(
            "1/n < eps <= min(p, 1-p)",
            format!("eps = {eps} exceeds min(p, 1-p) = {limit}"),
        ));
    }
    let alpha = correction_factor(n, eps)?;
    let beta = 2.0 / (1.0 + eps * eps);
    Ok(BoundValue::exponential(
        BoundFamily::ContinuousCorrected,
        alpha,
        beta,
        n,
        eps,
        Regime::Certified,
    ))
}

/// `0.5 exp(-n delta^2 / (2 p (1-p)))`: upper deviation when `p >= 1/2`,
/// lower deviation when `p <= 1/2`.
pub fn one_sided_bound(n: u64, p: f64, delta: f64) -> Result<BoundValue> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("one-sided bound needs 0 < p < 1 (got {p})")));
    }
    let certified = delta > 0.0 && {
        let nf = n as f64;
        divisors(n).into_iter().any(|d| {
            d >= 2
                && matches!(near_integer(p * d as f64), Some(r) if r >= 1 && r < d)
                && matches!(near_integer(delta * d as f64), Some(v) if v >= 1)
                && nf >= d as f64
        })
    };
    let beta = 1.0 / (2.0 * p * (1.0 - p));
    Ok(BoundValue::exponential(
        BoundFamily::OneSidedHalf,
        0.5,
        beta,
        n,
        delta,
        Regime::from_flag(certified),
    ))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Limit `exp(-2 t^2 p (1-p))` shared by the α = 1 bounds on `P(|η_n| > t)`
/// for the normalised sum η_n.
pub fn normalized_sum_bound(t: f64, p: f64) -> f64 {
    (-2.0 * t * t * p * (1.0 - p)).exp()
}

/// Hoeffding's analogue of [`normalized_sum_bound`]: twice the value.
pub fn normalized_sum_hoeffding(t: f64, p: f64) -> f64 {
    2.0 * normalized_sum_bound(t, p)
}

/// Where the general-discrete bound stops improving on Hoeffding's.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossoverResult {
    pub n: u64,
    pub phi: f64,
    pub mu: f64,
    pub mu_squared: f64,
}

/// Closed-form crossover `mu(n)`: with `φ = ln 2 / (2n)`,
/// `mu^2 = φ/2 + sqrt(φ (1 + φ/4))`. Below `mu` the general-discrete bound
/// is smaller than Hoeffding's, above it larger.
pub fn crossover_epsilon(n: u64) -> CrossoverResult {
    let phi = std::f64::consts::LN_2 / (2.0 * n as f64);
    let mu_squared = phi / 2.0 + (phi * (1.0 + phi / 4.0)).sqrt();
    CrossoverResult {
        n,
        phi,
        mu: mu_squared.sqrt(),
        mu_squared,
    }
}

/// `2 delta / (2 + delta)`, a lower bound on `ln(1 + delta)` for `delta >= 0`.
pub fn log1p_lower(delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(domain(format!("log1p_lower needs delta >= 0 (got {delta})")));
    }
    if delta.is_infinite() {
        return Ok(2.0);
    }
    Ok(2.0 * delta / (2.0 + delta))
}

/// `f(p) = p^p (1+p)^(1-p)`, the per-trial base of the upper bound
/// `P⁰ <= f(p)^n` on the central mass. `f(0) = f(1) = 1`.
pub fn central_mass_base(p: f64) -> f64 {
    p.powf(p) * (1.0 + p).powf(1.0 - p)
}

/// Inputs for [`evaluate`]. `p` is needed by the continuous and one-sided
/// families and refines the regime check of the lattice families. For the
/// normalized family `eps` is read as `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundQuery {
    pub n: u64,
    pub eps: f64,
    pub p: Option<f64>,
}

/// Evaluates any family from `(n, eps, p)`.
pub fn evaluate(family: BoundFamily, q: &BoundQuery) -> Result<BoundValue> {
    let need_p = || {
        q.p.ok_or_else(|| domain(format!("family {family} needs p")))
    };
    match family {
        BoundFamily::Uspensky => Ok(uspensky_bound(q.n, q.eps)),
        BoundFamily::Hoeffding => Ok(hoeffding_bound(q.n, q.eps)),
        BoundFamily::BernoulliSharp => {
            let mut v = bernoulli_sharp_bound(q.n, q.eps);
            v.regime = Regime::from_flag(on_bernoulli_lattice(q.n, q.eps, q.p));
            Ok(v)
        }
        BoundFamily::GeneralDiscrete => {
            let mut v = general_discrete_bound(q.n, q.eps);
            v.regime = Regime::from_flag(on_discrete_lattice(q.n, q.eps, q.p));
            Ok(v)
        }
        BoundFamily::ContinuousCorrected => continuous_bound(q.n, need_p()?, q.eps),
        BoundFamily::OneSidedHalf => one_sided_bound(q.n, need_p()?, q.eps),
        BoundFamily::NormalizedAsymptotic => {
            let p = need_p()?;
            if !(p > 0.0 && p < 1.0) {
                return Err(domain(format!("normalized bound needs 0 < p < 1 (got {p})")));
            }
            let t = q.eps;
            Ok(BoundValue {
                family,
                alpha: 1.0,
                beta: 2.0,
                value: normalized_sum_bound(t, p),
                regime: Regime::from_flag((0.0..=1.0).contains(&t)),
            })
        }
        BoundFamily::ClassicalBernoulli => {
            let p = need_p()?;
            let lattice = on_bernoulli_lattice(q.n, q.eps, Some(p));
            if !lattice {
                return Err(regime(
                    "p = r/(r+s), n = k(r+s), eps = 1/(r+s)",
                    format!("(n={}, p={p}, eps={}) is not on a Bernoulli lattice", q.n, q.eps),
                ));
            }
            let d = (1.0 / q.eps).round() as u64;
            let r = (p * d as f64).round() as u64;
            classical_bernoulli_bound(q.n / d, r, d - r).map(|(_, v)| v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classical_small_grid() {
        // k=1, r=s=2: xi1 = xi2 = (1*3 + 2)/5 = 1.
        let (params, bound) = classical_bernoulli_bound(1, 2, 2).unwrap();
        assert_eq!(params.xi1, BigRational::from_integer(1.into()));
        assert_eq!(params.xi2, params.xi1);
        assert!(close(params.branch1, 1.5, 1e-15));
        assert!(close(params.branch2, 1.5, 1e-15));
        assert!(close(bound.value, 1.0 / 2.5, 1e-15));
        assert!(params.value_simplified >= bound.value);
    }

    #[test]
    fn classical_xi_floor_and_limit() {
        let (params, _) = classical_bernoulli_bound(3, 2, 5).unwrap();
        let floor = BigRational::new(3.into(), 7.into());
        assert!(params.xi1 >= floor && params.xi2 >= floor);
        let (_, far) = classical_bernoulli_bound(5000, 3, 4).unwrap();
        assert!(far.value < 1e-12);
    }

    #[test]
    fn classical_rejects_vanishing_denominators() {
        let err = classical_bernoulli_bound(1, 1, 3).unwrap_err();
        assert!(err.to_string().contains("r-1"));
        let err = classical_bernoulli_bound(1, 3, 1).unwrap_err();
        assert!(err.to_string().contains("s-1"));
    }

    #[test]
    fn zero_deviation_gives_alpha() {
        for n in [1, 33, 1000] {
            assert_eq!(uspensky_bound(n, 0.0).value, 2.0);
            assert_eq!(hoeffding_bound(n, 0.0).value, 2.0);
            assert_eq!(bernoulli_sharp_bound(n, 0.0).value, 1.0);
            assert_eq!(general_discrete_bound(n, 0.0).value, 1.0);
        }
    }

    #[test]
    fn point_values() {
        assert!(close(uspensky_bound(33, 2.0 / 33.0).value, 2.0 * (-2.0f64 / 33.0).exp(), 1e-15));
        assert!(close(bernoulli_sharp_bound(10, 0.2).value, (-0.8f64).exp(), 1e-15));
        let os = one_sided_bound(10, 0.6, 0.1).unwrap();
        assert!(close(os.value, 0.5 * (-0.1f64 / 0.48).exp(), 1e-15));
        assert!(os.regime.is_certified());
        assert!(close(normalized_sum_bound(1.0, 0.5), (-0.5f64).exp(), 1e-15));
        assert_eq!(normalized_sum_bound(0.0, 0.3), 1.0);
        assert_eq!(normalized_sum_hoeffding(0.7, 0.3), 2.0 * normalized_sum_bound(0.7, 0.3));
    }

    #[test]
    fn one_sided_half_coin_matches_half_hoeffding_exponent() {
        let v = one_sided_bound(50, 0.5, 0.1).unwrap();
        assert!(close(v.value, 0.5 * (-2.0f64 * 50.0 * 0.01).exp(), 1e-15));
        assert!(one_sided_bound(50, 0.0, 0.1).is_err());
    }

    #[test]
    fn regimes() {
        assert!(bernoulli_sharp_bound(10, 0.2).regime.is_certified());
        assert!(!bernoulli_sharp_bound(10, 0.3).regime.is_certified());
        assert!(general_discrete_bound(33, 2.0 / 33.0).regime.is_certified());
        assert!(!general_discrete_bound(33, 1.0 / 33.0).regime.is_certified());
        assert!(!general_discrete_bound(33, 0.1).regime.is_certified());
        let q = BoundQuery { n: 10, eps: 0.2, p: Some(0.55) };
        assert!(!evaluate(BoundFamily::BernoulliSharp, &q).unwrap().regime.is_certified());
        let q = BoundQuery { n: 10, eps: 0.2, p: Some(0.6) };
        assert!(evaluate(BoundFamily::BernoulliSharp, &q).unwrap().regime.is_certified());
    }

    #[test]
    fn continuous_regime_errors() {
        assert!(continuous_bound(100, 0.5, 0.005).is_err());
        assert!(continuous_bound(100, 0.5, 0.01).is_err());
        assert!(continuous_bound(100, 0.9, 0.2).is_err());
        assert!(continuous_bound(100, 0.0, 0.2).is_err());
        assert!(phi_correction(10, 0.1).is_err());
    }

    #[test]
    fn continuous_dominates_general_discrete() {
        let c = continuous_bound(100, 0.5, 0.1).unwrap();
        let g = general_discrete_bound(100, 0.1);
        assert!(c.value >= g.value);
        assert!(close(c.value, c.alpha * (-2.0f64 / 1.01).exp(), 1e-12));
    }

    #[test]
    fn crossover_closed_form_is_a_root() {
        for n in [10u64, 33, 1000] {
            let c = crossover_epsilon(n);
            let e = c.mu;
            let gap = general_discrete_bound(n, e).value - hoeffding_bound(n, e).value;
            assert!(gap.abs() < 1e-12, "n={n} gap={gap}");
        }
    }

    #[test]
    fn log1p_lower_values() {
        assert_eq!(log1p_lower(0.0).unwrap(), 0.0);
        assert!(close(log1p_lower(1.0).unwrap(), 2.0 / 3.0, 1e-16));
        assert!(log1p_lower(1.0).unwrap() <= 2f64.ln());
        assert!(log1p_lower(-0.1).is_err());
        assert!(log1p_lower(f64::NAN).is_err());
    }

    #[test]
    fn central_mass_base_shape() {
        assert_eq!(central_mass_base(0.0), 1.0);
        assert_eq!(central_mass_base(1.0), 1.0);
        assert!(close(central_mass_base(0.5), 3f64.sqrt() / 2.0, 1e-15));
    }

    #[test]
    fn family_names_round_trip() {
        for f in BoundFamily::ALL {
            assert_eq!(f.name().parse::<BoundFamily>().unwrap(), f);
        }
        assert!("bogus".parse::<BoundFamily>().is_err());
    }

    #[test]
    fn evaluate_dispatch() {
        let q = BoundQuery { n: 10, eps: 0.2, p: Some(0.6) };
        let v = evaluate(BoundFamily::ClassicalBernoulli, &q).unwrap();
        let (_, direct) = classical_bernoulli_bound(2, 3, 2).unwrap();
        assert_eq!(v, direct);
        let off = BoundQuery { n: 10, eps: 0.25, p: Some(0.6) };
        assert!(evaluate(BoundFamily::ClassicalBernoulli, &off).is_err());
        let no_p = BoundQuery { n: 10, eps: 0.2, p: None };
        assert!(evaluate(BoundFamily::ContinuousCorrected, &no_p).is_err());
    }
}
