//! Inverting the bound families for planning: the smallest `n` that pushes
//! a bound below a target at fixed `eps`, and the smallest `eps` reachable
//! at fixed `n`.
//!
//! Families of the form `alpha * exp(-beta eps^2 n)` with `beta` free of
//! `n` are inverted in closed form and then nudged by direct evaluation so
//! the answer is exactly minimal. The continuous family depends on `n`
//! through its correction factor and is solved by bisection. A bound equal
//! to the target counts as meeting it.

use serde::Serialize;

use crate::bounds::{evaluate, BoundFamily, BoundQuery, BoundValue};
use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unknown {
    N,
    Eps,
    /// Both given; the bound is only evaluated.
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Bisection,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanResult {
    pub family: BoundFamily,
    pub unknown: Unknown,
    pub n: u64,
    pub eps: f64,
    pub target: f64,
    pub achieved_bound: f64,
    /// `(n, eps)` satisfies the family's stated preconditions.
    pub certified: bool,
    pub method: Method,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct PlanOptions {
    /// Success probability; required by the continuous and one-sided families.
    pub p: Option<f64>,
    /// Use bisection even where a closed form exists.
    pub force_bisection: bool,
}

// Search limits.
const MAX_N: u64 = 1 << 62;
const EPS_REL_TOL: f64 = 1e-12;

fn check_target(target: f64) -> Result<()> {
    if !(target > 0.0 && target < 1.0) {
        return Err(domain(format!("target must lie in (0, 1) (got {target})")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("eps must lie in (0, 1) (got {eps})")));
    }
    Ok(())
}

/// `(alpha, beta)` at this `eps` when neither depends on `n`.
fn fixed_shape(family: BoundFamily, eps: f64, p: Option<f64>) -> Result<Option<(f64, f64)>> {
    Ok(match family {
        BoundFamily::Uspensky => Some((2.0, 0.5)),
        BoundFamily::Hoeffding => Some((2.0, 2.0)),
        BoundFamily::BernoulliSharp => Some((1.0, 2.0)),
        BoundFamily::GeneralDiscrete => Some((1.0, 2.0 / (1.0 + eps * eps))),
        BoundFamily::OneSidedHalf => {
            let p = p.ok_or_else(|| domain("one-sided planning needs p"))?;
            if !(p > 0.0 && p < 1.0) {
                return Err(domain(format!("needs 0 < p < 1 (got {p})")));
            }
            Some((0.5, 1.0 / (2.0 * p * (1.0 - p))))
        }
        BoundFamily::ContinuousCorrected => None,
        BoundFamily::ClassicalBernoulli | BoundFamily::NormalizedAsymptotic => {
            return Err(Error::Unsupported(format!(
                "the {family} bound is not a function of (n, eps) that can be inverted"
            )))
        }
    })
}

fn bound_at(family: BoundFamily, n: u64, eps: f64, p: Option<f64>) -> Result<BoundValue> {
    evaluate(family, &BoundQuery { n, eps, p })
}

/// Bound value, or `+inf` where the family is undefined at `(n, eps)`.
fn value_or_inf(family: BoundFamily, n: u64, eps: f64, p: Option<f64>) -> f64 {
    bound_at(family, n, eps, p).map(|v| v.value).unwrap_or(f64::INFINITY)
}

#[allow(clippy::too_many_arguments)]
fn result(
    family: BoundFamily,
    unknown: Unknown,
    n: u64,
    eps: f64,
    target: f64,
    p: Option<f64>,
    method: Method,
    note: Option<String>,
) -> Result<PlanResult> {
    let v = bound_at(family, n, eps, p)?;
    Ok(PlanResult {
        family,
        unknown,
        n,
        eps,
        target,
        achieved_bound: v.value,
        certified: v.regime.is_certified(),
        method,
        note,
    })
}

/// Smallest `n` with `bound(n, eps) <= target`.
pub fn min_n(eps: f64, target: f64, family: BoundFamily, opts: &PlanOptions) -> Result<PlanResult> {
    check_eps(eps)?;
    check_target(target)?;
    let p = opts.p;
    if family == BoundFamily::ContinuousCorrected {
        let p = p.ok_or_else(|| domain("continuous planning needs p"))?;
        if eps > p.min(1.0 - p) {
            return Err(crate::error::regime(
                "1/n < eps <= min(p, 1-p)",
                format!("eps = {eps} exceeds min(p, 1-p)"),
            ));
        }
        // Defined only for n eps > 1.
        let first = (1.0 / eps).floor() as u64 + 1;
        let n = bisect_n(family, eps, target, Some(p), first)?;
        let before = value_or_inf(family, n - 1, eps, Some(p));
        if n > first && before <= target {
            return Err(Error::NonMonotone(format!("bound at n = {} already meets the target", n - 1)));
        }
        let note = (n == first).then(|| "smallest n with n eps > 1".to_string());
        return result(family, Unknown::N, n, eps, target, Some(p), Method::Bisection, note);
    }
    let (alpha, beta) = fixed_shape(family, eps, p)?.expect("fixed shape");
    if target >= alpha {
        return result(
            family,
            Unknown::N,
            1,
            eps,
            target,
            p,
            Method::ClosedForm,
            Some(format!("target is at or above alpha = {alpha}")),
        );
    }
    if opts.force_bisection {
        let n = bisect_n(family, eps, target, p, 1)?;
        return result(family, Unknown::N, n, eps, target, p, Method::Bisection, None);
    }
    let raw = (alpha / target).ln() / (beta * eps * eps);
    let mut n = (raw.ceil().max(1.0)).min(MAX_N as f64) as u64;
    let value = |n: u64| value_or_inf(family, n, eps, p);
    while n > 1 && value(n - 1) <= target {
        n -= 1;
    }
    while value(n) > target {
        if n >= MAX_N {
            return Err(Error::Unsupported("target not reachable".into()));
        }
        n += 1;
    }
    result(family, Unknown::N, n, eps, target, p, Method::ClosedForm, None)
}

/// Bracket doubling from `first`, then integer bisection with the
/// invariant `bound(lo) > target >= bound(hi)`.
fn bisect_n(family: BoundFamily, eps: f64, target: f64, p: Option<f64>, first: u64) -> Result<u64> {
    let value = |n: u64| value_or_inf(family, n, eps, p);
    if value(first) <= target {
        return Ok(first);
    }
    let (mut lo, mut hi) = (first, first.max(1) * 2);
    while value(hi) > target {
        if hi >= MAX_N {
            return Err(Error::Unsupported("target not reachable".into()));
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(MAX_N);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if value(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `eps` (to relative tolerance `1e-12`) with
/// `bound(n, eps) <= target`.
pub fn min_eps(n: u64, target: f64, family: BoundFamily, opts: &PlanOptions) -> Result<PlanResult> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    check_target(target)?;
    let p = opts.p;
    let nf = n as f64;
    let unreachable = || Error::Unsupported(format!("no eps in (0, 1) brings the {family} bound to {target} at n = {n}"));
    if family == BoundFamily::ContinuousCorrected {
        let p = p.ok_or_else(|| domain("continuous planning needs p"))?;
        let hi = p.min(1.0 - p);
        let lo = 1.0 / nf;
        if !(hi > lo) || value_or_inf(family, n, hi, Some(p)) > target {
            return Err(unreachable());
        }
        let eps = bisect_eps(family, n, target, Some(p), lo, hi);
        return result(family, Unknown::Eps, n, eps, target, Some(p), Method::Bisection, None);
    }
    // Shape check with a placeholder eps; only the general-discrete beta
    // depends on eps and it is handled separately.
    let (alpha, beta) = fixed_shape(family, 0.5, p)?.expect("fixed shape");
    if target >= alpha {
        return result(
            family,
            Unknown::Eps,
            n,
            0.0,
            target,
            p,
            Method::ClosedForm,
            Some(format!("target is at or above alpha = {alpha}; any eps meets it")),
        );
    }
    if opts.force_bisection {
        if value_or_inf(family, n, 1.0, p) > target {
            return Err(unreachable());
        }
        let eps = bisect_eps(family, n, target, p, 0.0, 1.0);
        return result(family, Unknown::Eps, n, eps, target, p, Method::Bisection, None);
    }
    let eps = if family == BoundFamily::GeneralDiscrete {
        let x = (1.0 / target).ln() / (2.0 * nf);
        if x >= 0.5 {
            return Err(unreachable());
        }
        (x / (1.0 - x)).sqrt()
    } else {
        ((alpha / target).ln() / (beta * nf)).sqrt()
    };
    if eps >= 1.0 {
        return Err(unreachable());
    }
    // Guard against rounding putting the bound a hair above the target.
    let mut eps = eps;
    while value_or_inf(family, n, eps, p) > target {
        eps = eps * (1.0 + f64::EPSILON) + f64::MIN_POSITIVE;
    }
    result(family, Unknown::Eps, n, eps, target, p, Method::ClosedForm, None)
}

/// Bisection on `(lo, hi]` keeping `bound(hi) <= target`.
fn bisect_eps(family: BoundFamily, n: u64, target: f64, p: Option<f64>, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        if hi - lo <= EPS_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if value_or_inf(family, n, mid, p) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "solve", rename_all = "snake_case")]
pub enum PlanQuery {
    MinN { eps: f64 },
    MinEps { n: u64 },
    Fixed { n: u64, eps: f64 },
}

/// Families that can be planned with or without `p`.
fn plannable(p: Option<f64>) -> Vec<BoundFamily> {
    let mut out = vec![
        BoundFamily::Uspensky,
        BoundFamily::Hoeffding,
        BoundFamily::BernoulliSharp,
        BoundFamily::GeneralDiscrete,
    ];
    if p.is_some() {
        out.push(BoundFamily::ContinuousCorrected);
    }
    out
}

/// Every plannable family answered and ranked: by `n` for
/// [`PlanQuery::MinN`], by `eps` for [`PlanQuery::MinEps`], by bound value
/// for [`PlanQuery::Fixed`]. Ties fall back to the achieved bound, then the
/// family name. Families that cannot answer the query are left out.
pub fn best_family(query: PlanQuery, target: f64, opts: &PlanOptions) -> Result<Vec<PlanResult>> {
    let mut results: Vec<PlanResult> = plannable(opts.p)
        .into_iter()
        .filter_map(|family| match query {
            PlanQuery::MinN { eps } => min_n(eps, target, family, opts).ok(),
            PlanQuery::MinEps { n } => min_eps(n, target, family, opts).ok(),
            PlanQuery::Fixed { n, eps } => {
                result(family, Unknown::Neither, n, eps, target, opts.p, Method::Direct, None).ok()
            }
        })
        .collect();
    if results.is_empty() {
        return Err(Error::Unsupported("no family can answer this query".into()));
    }
    let key = |r: &PlanResult| match query {
        PlanQuery::MinN { .. } => r.n as f64,
        PlanQuery::MinEps { .. } => r.eps,
        PlanQuery::Fixed { .. } => r.achieved_bound,
    };
    results.sort_by(|a, b| {
        key(a)
            .total_cmp(&key(b))
            .then(a.achieved_bound.total_cmp(&b.achieved_bound))
            .then(a.family.name().cmp(b.family.name()))
    });
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> PlanOptions {
        PlanOptions::default()
    }

    #[test]
    fn closed_form_examples() {
        let r = min_n(0.1, 0.05, BoundFamily::Hoeffding, &opts()).unwrap();
        assert_eq!(r.n, 185);
        assert!(r.achieved_bound <= 0.05);
        assert!(crate::bounds::hoeffding_bound(184, 0.1).value > 0.05);
        assert_eq!(min_n(0.1, 0.05, BoundFamily::BernoulliSharp, &opts()).unwrap().n, 150);
        assert_eq!(min_n(0.1, 0.05, BoundFamily::GeneralDiscrete, &opts()).unwrap().n, 152);
    }

    #[test]
    fn forced_bisection_agrees() {
        let forced = PlanOptions {
            force_bisection: true,
            ..opts()
        };
        for (eps, target) in [(0.1, 0.05), (0.02, 0.01), (0.3, 0.5), (0.5, 1e-6)] {
            let a = min_n(eps, target, BoundFamily::GeneralDiscrete, &opts()).unwrap();
            let b = min_n(eps, target, BoundFamily::GeneralDiscrete, &forced).unwrap();
            assert_eq!(a.n, b.n);
            assert_eq!(b.method, Method::Bisection);
        }
    }

    #[test]
    fn min_eps_closed_forms() {
        let r = min_eps(100, 0.05, BoundFamily::Hoeffding, &opts()).unwrap();
        let expected = (40f64.ln() / 200.0).sqrt();
        assert!((r.eps - expected).abs() <= 1e-12 * expected);
        assert!(r.achieved_bound <= 0.05);

        let r = min_eps(100, 0.05, BoundFamily::GeneralDiscrete, &opts()).unwrap();
        let x = 20f64.ln() / 200.0;
        assert!((r.eps - (x / (1.0 - x)).sqrt()).abs() < 1e-12);

        let forced = PlanOptions {
            force_bisection: true,
            ..opts()
        };
        let b = min_eps(100, 0.05, BoundFamily::GeneralDiscrete, &forced).unwrap();
        assert!((b.eps - r.eps).abs() <= 2e-12 * r.eps);
    }

    #[test]
    fn target_near_one() {
        let r = min_eps(100, 1.0 - 1e-9, BoundFamily::BernoulliSharp, &opts()).unwrap();
        assert!(r.eps < 1e-3);
        let r = min_n(0.1, 0.99, BoundFamily::Hoeffding, &opts()).unwrap();
        assert!(r.n > 1);
        assert_eq!(min_n(0.1, 0.5, BoundFamily::Hoeffding, &opts()).unwrap().n, 70);
    }

    #[test]
    fn continuous_bisection() {
        let o = PlanOptions {
            p: Some(0.5),
            ..opts()
        };
        let r = min_n(0.1, 0.05, BoundFamily::ContinuousCorrected, &o).unwrap();
        assert!(r.achieved_bound <= 0.05 && r.certified);
        let prev = crate::bounds::continuous_bound(r.n - 1, 0.5, 0.1).unwrap().value;
        assert!(prev > 0.05);
        let e = min_eps(1000, 0.05, BoundFamily::ContinuousCorrected, &o).unwrap();
        assert!(e.achieved_bound <= 0.05);
        assert!(min_n(0.1, 0.05, BoundFamily::ContinuousCorrected, &opts()).is_err());
    }

    #[test]
    fn unsupported_families() {
        assert!(matches!(
            min_n(0.1, 0.05, BoundFamily::NormalizedAsymptotic, &opts()),
            Err(Error::Unsupported(_))
        ));
        assert!(min_n(0.0, 0.05, BoundFamily::Hoeffding, &opts()).is_err());
        assert!(min_n(0.1, 1.0, BoundFamily::Hoeffding, &opts()).is_err());
    }

    #[test]
    fn ranking_flips_across_crossover() {
        let below = best_family(PlanQuery::Fixed { n: 33, eps: 7.0 / 33.0 }, 0.5, &opts()).unwrap();
        let pos = |rs: &[PlanResult], f| rs.iter().position(|r| r.family == f).unwrap();
        assert!(pos(&below, BoundFamily::GeneralDiscrete) < pos(&below, BoundFamily::Hoeffding));
        let gd = &below[pos(&below, BoundFamily::GeneralDiscrete)];
        assert!((gd.achieved_bound - 0.058319).abs() < 1e-6);
        let above = best_family(PlanQuery::Fixed { n: 33, eps: 12.0 / 33.0 }, 0.5, &opts()).unwrap();
        assert!(pos(&above, BoundFamily::Hoeffding) < pos(&above, BoundFamily::GeneralDiscrete));
        let mu = crate::bounds::crossover_epsilon(33).mu;
        assert!(mu > 10.0 / 33.0 && mu < 12.0 / 33.0);
    }
}
