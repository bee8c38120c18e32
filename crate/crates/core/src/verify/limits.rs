//! Sequences that exhibit limiting behaviour rather than a pass/fail
//! inequality: deviations at `eps = 1/(2n)` whose probability tends to one,
//! and the normalised-sum limit of the bound families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bounds::{
    bernoulli_sharp_bound, continuous_bound, general_discrete_bound, hoeffding_bound, normalized_sum_bound,
    normalized_sum_hoeffding,
};
use crate::error::{domain, Result};
use crate::exact_binomial::{binomial_pmf, tail_probability, Boundary, RationalProb, Side};

use super::enclosure::Enclosure;
use super::report::{CheckKind, RatioCheck, Relation, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proposition1Row {
    pub n: u64,
    /// `1 / (2n)`.
    pub eps: RationalProb,
    /// Exact `P(|X̄ - p| > eps)`.
    pub deviation: RationalProb,
    pub deviation_f64: f64,
    /// `eps^2 n = 1/(4n)`.
    pub eps2_n: f64,
    /// Exact `P(X = np)`; zero when `np` is not an integer.
    pub central: RationalProb,
    /// `(p^p (1+p)^(1-p))^n`.
    pub central_bound: f64,
    /// Exact `P(X = np) <= p^np (1+p)^(n-np)` when `np` is an integer.
    /// Informational: the inequality fails once `n` is moderately large,
    /// since the central mass decays only like `n^(-1/2)`.
    pub central_check: Option<RatioCheck>,
    /// No lattice point other than `np` itself lies within `eps` of `np`.
    pub inner_empty: bool,
    pub notes: Vec<String>,
}

/// Exact deviation probabilities at `eps = 1/(2n)` for each `n`, with the
/// central-mass bound checked where `np` is a lattice point.
pub fn check_proposition1(n_list: &[u64], p: &RationalProb) -> Result<Vec<Proposition1Row>> {
    if p.is_zero() || *p == RationalProb::one() {
        return Err(domain("needs 0 < p < 1"));
    }
    n_list
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(domain("n must be positive"));
            }
            let eps = RationalProb::new(1u64, 2 * n)?;
            let deviation = tail_probability(n, p, &eps, Side::Two, Boundary::Strict)?;
            let np = p.as_ratio() * BigRational::from_integer(n.into());
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            // Lattice points j != np with |j - np| <= 1/2.
            let mut inner = Vec::new();
            let base = np.floor().to_integer();
            for j in [&base - 1, base.clone(), &base + 1, &base + 2] {
                let jr = BigRational::from_integer(j.clone());
                let dist = if jr > np { &jr - &np } else { &np - &jr };
                if !dist.is_zero() && dist <= half && j >= BigInt::zero() && j <= BigInt::from(n) {
                    inner.push(j);
                }
            }
            let mut notes = Vec::new();
            if !inner.is_empty() {
                let list: Vec<String> = inner.iter().map(|j| j.to_string()).collect();
                notes.push(format!("lattice points within eps of np: {}", list.join(", ")));
            }
            let pf = p.to_f64();
            let mut central = RationalProb::zero();
            let central_check = if np.is_integer() {
                let m: u64 = np.to_integer().try_into().expect("m <= n");
                let p0 = binomial_pmf(n, m, p)?;
                central = p0.clone();
                let one_plus = BigRational::one() + p.as_ratio();
                let bound = num_traits::pow(p.as_ratio().clone(), m as usize)
                    * num_traits::pow(one_plus, (n - m) as usize);
                let check = RatioCheck::new(
                    CheckKind::CentralMass,
                    m,
                    p0.numer(),
                    p0.denom(),
                    Relation::AtMost,
                    &Enclosure::exact(&bound),
                );
                if check.verdict != Verdict::Pass {
                    notes.push("central mass exceeds p^np (1+p)^(n-np)".into());
                }
                Some(check)
            } else {
                notes.push("np is not a lattice point; central mass is zero".into());
                None
            };
            Ok(Proposition1Row {
                n,
                deviation_f64: deviation.to_f64(),
                eps,
                deviation,
                central,
                eps2_n: 1.0 / (4.0 * n as f64),
                central_bound: (n as f64 * (pf * pf.ln() + (1.0 - pf) * pf.ln_1p())).exp(),
                central_check,
                inner_empty: inner.is_empty(),
                notes,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedRow {
    pub n: u64,
    /// `t sqrt(p (1-p) / n)`.
    pub eps: f64,
    pub sharp: f64,
    pub general: f64,
    /// Absent where `n eps <= 1` or `eps > min(p, 1-p)`.
    pub continuous: Option<f64>,
    pub hoeffding: f64,
    pub limit: f64,
    pub hoeffding_limit: f64,
    pub note: Option<String>,
}

/// Bounds at `eps = t sqrt(p (1-p) / n)`, which tend to
/// `exp(-2 t^2 p (1-p))` (and twice that for Hoeffding) as `n` grows.
pub fn check_normalized_limit(p: f64, t: f64, n_list: &[u64]) -> Result<Vec<NormalizedRow>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("needs 0 < p < 1 (got {p})")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("needs 0 <= t <= 1 (got {t})")));
    }
    let limit = normalized_sum_bound(t, p);
    let hoeffding_limit = normalized_sum_hoeffding(t, p);
    n_list
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(domain("n must be positive"));
            }
            let eps = t * (p * (1.0 - p) / n as f64).sqrt();
            let (continuous, note) = match continuous_bound(n, p, eps) {
                Ok(v) => (Some(v.value), None),
                Err(e) => (None, Some(format!("continuous bound skipped: {e}"))),
            };
            Ok(NormalizedRow {
                n,
                eps,
                sharp: bernoulli_sharp_bound(n, eps).value,
                general: general_discrete_bound(n, eps).value,
                continuous,
                hoeffding: hoeffding_bound(n, eps).value,
                limit,
                hoeffding_limit,
                note,
            })
        })
        .collect()
}
