//! Deviation probabilities `P(|X/n - p| > eps)` and their one-sided parts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};

use super::pmf::{log_binomial_pmf, BinomialWeights, LogProb};
use super::rational::RationalProb;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Two,
    Upper,
    Lower,
}

/// Whether the deviation event uses `>` (strict) or `>=` (weak).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Strict,
    Weak,
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(Side::Two),
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected two, upper or lower".into(),
            }),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Boundary::Strict),
            "weak" => Ok(Boundary::Weak),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected strict or weak".into(),
            }),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Two => "two",
            Side::Upper => "upper",
            Side::Lower => "lower",
        })
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Strict => "strict",
            Boundary::Weak => "weak",
        })
    }
}

/// Index ranges (inclusive) of the lattice points inside a deviation event.
/// Either range may be empty (`lo > hi`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailIndices {
    pub lower: (i64, i64),
    pub upper: (i64, i64),
}

impl TailIndices {
    pub fn contains(&self, j: i64) -> bool {
        (self.lower.0..=self.lower.1).contains(&j) || (self.upper.0..=self.upper.1).contains(&j)
    }
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().unwrap_or(if x.is_zero() { 0 } else { i64::MAX })
}

pub fn tail_indices(
    n: u64,
    p: &RationalProb,
    eps: &RationalProb,
    side: Side,
    boundary: Boundary,
) -> Result<TailIndices> {
    if p.is_zero() || *p == RationalProb::one() {
        return Err(domain("deviation probabilities exclude the trivial cases p = 0 and p = 1"));
    }
    if eps.is_zero() {
        return Err(domain("deviation level eps must be positive"));
    }
    let nn = BigRational::from_integer(n.into());
    let above = &nn * (p.as_ratio() + eps.as_ratio());
    let below = &nn * (p.as_ratio() - eps.as_ratio());
    let (upper_from, lower_to) = match boundary {
        Boundary::Strict => (
            to_i64(&above.floor().to_integer()) + 1,
            to_i64(&below.ceil().to_integer()) - 1,
        ),
        Boundary::Weak => (
            to_i64(&above.ceil().to_integer()),
            to_i64(&below.floor().to_integer()),
        ),
    };
    let n = n as i64;
    let empty = (1, 0);
    let upper = if side == Side::Lower { empty } else { (upper_from.max(0), n) };
    let lower = if side == Side::Upper { empty } else { (0, lower_to.min(n)) };
    Ok(TailIndices { lower, upper })
}

/// Exact deviation probability. `Strict` counts `|j/n - p| > eps`, `Weak`
/// counts `>=`; `side` restricts to one direction.
pub fn tail_probability(
    n: u64,
    p: &RationalProb,
    eps: &RationalProb,
    side: Side,
    boundary: Boundary,
) -> Result<RationalProb> {
    let idx = tail_indices(n, p, eps, side, boundary)?;
    let w = BinomialWeights::new(n, p);
    Ok(exact_tail_from_weights(&w, &idx))
}

pub(crate) fn exact_tail_from_weights(w: &BinomialWeights, idx: &TailIndices) -> RationalProb {
    let total = w.range_sum(idx.lower.0, idx.lower.1) + w.range_sum(idx.upper.0, idx.upper.1);
    RationalProb::from_parts_unchecked(total, w.denom().clone())
}

/// Deviation probability in the log domain. Terms are added in ascending
/// order with Neumaier compensation after factoring out the largest one.
pub fn log_tail_probability(
    n: u64,
    p: &RationalProb,
    eps: &RationalProb,
    side: Side,
    boundary: Boundary,
) -> Result<LogProb> {
    let idx = tail_indices(n, p, eps, side, boundary)?;
    let pf = p.to_f64();
    let mut logs = Vec::new();
    for (lo, hi) in [idx.lower, idx.upper] {
        for j in lo..=hi {
            logs.push(log_binomial_pmf(n, j as u64, pf)?.log_value());
        }
    }
    LogProb::new(log_sum_exp(&mut logs))
}

/// `log(sum(exp(x_i)))`; sorts its input.
pub fn log_sum_exp(logs: &mut [f64]) -> f64 {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    logs.sort_by(|a, b| a.total_cmp(b));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in logs.iter() {
        let term = (x - max).exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    max + (sum + comp).ln()
}

/// Tail value from whichever backend handled the request.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "backend", content = "value", rename_all = "snake_case")]
pub enum TailValue {
    Exact(RationalProb),
    Log(LogProb),
}

impl TailValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            TailValue::Exact(p) => p.to_f64(),
            TailValue::Log(l) => l.exp(),
        }
    }

    pub fn exact(&self) -> Option<&RationalProb> {
        match self {
            TailValue::Exact(p) => Some(p),
            TailValue::Log(_) => None,
        }
    }
}

/// Chooses the exact path up to `exact_threshold` trials and the log-domain
/// path above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Backend {
    pub exact_threshold: u64,
}

impl Default for Backend {
    fn default() -> Self {
        Self { exact_threshold: 500 }
    }
}

impl Backend {
    pub fn tail(
        &self,
        n: u64,
        p: &RationalProb,
        eps: &RationalProb,
        side: Side,
        boundary: Boundary,
    ) -> Result<TailValue> {
        if n <= self.exact_threshold {
            tail_probability(n, p, eps, side, boundary).map(TailValue::Exact)
        } else {
            log_tail_probability(n, p, eps, side, boundary).map(TailValue::Log)
        }
    }
}
