//! Binomial point masses on the exact and log-domain paths.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

use super::rational::RationalProb;

/// Natural log of a probability. `-inf` stands for probability zero.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    /// Accepts any log value up to a small positive slack for rounding.
    pub fn new(log_value: f64) -> Result<Self> {
        if log_value.is_nan() || log_value > 1e-9 {
            return Err(domain(format!("{log_value} is not the log of a probability")));
        }
        Ok(Self(log_value.min(0.0)))
    }

    pub fn zero() -> Self {
        Self(f64::NEG_INFINITY)
    }

    pub fn log_value(&self) -> f64 {
        self.0
    }

    pub fn exp(&self) -> f64 {
        self.0.exp()
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

impl Serialize for LogProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

pub fn binomial_coefficient(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let j = j.min(n - j);
    let mut c = BigInt::one();
    for i in 0..j {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// `C(n, j) p^j (1-p)^(n-j)`, exactly. Degenerate `p` in `{0, 1}` is allowed.
pub fn binomial_pmf(n: u64, j: u64, p: &RationalProb) -> Result<RationalProb> {
    if j > n {
        return Err(domain(format!("index j={j} exceeds n={n}")));
    }
    let q = p.complement();
    let value = BigRational::from_integer(binomial_coefficient(n, j))
        * num_traits::pow(p.as_ratio().clone(), j as usize)
        * num_traits::pow(q.into_ratio(), (n - j) as usize);
    RationalProb::from_ratio(value)
}

/// `log C(n, j) + j log p + (n-j) log(1-p)` through log-factorials.
pub fn log_binomial_pmf(n: u64, j: u64, p: f64) -> Result<LogProb> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("log-domain pmf needs 0 < p < 1 (got {p})")));
    }
    if j > n {
        return Err(domain(format!("index j={j} exceeds n={n}")));
    }
    let value = ln_choose(n, j) + j as f64 * p.ln() + (n - j) as f64 * (-p).ln_1p();
    LogProb::new(value)
}

pub(crate) fn ln_choose(n: u64, j: u64) -> f64 {
    statrs::function::factorial::ln_binomial(n, j)
}

/// All point masses of `Binomial(n, a/b)` over the common denominator `b^n`:
/// `w_j = C(n, j) a^j (b-a)^(n-j)`. Group and tail masses become integer
/// range sums, which keeps the exact sweeps free of repeated gcd work.
#[derive(Clone, Debug)]
pub struct BinomialWeights {
    n: u64,
    p: RationalProb,
    denom: BigInt,
    /// `prefix[i] = w_0 + ... + w_{i-1}`.
    prefix: Vec<BigInt>,
}

impl BinomialWeights {
    pub fn new(n: u64, p: &RationalProb) -> Self {
        let a = p.numer().clone();
        let b = p.denom().clone();
        let c = &b - &a;
        let len = n as usize + 1;
        let mut pow_a = Vec::with_capacity(len);
        let mut pow_c = Vec::with_capacity(len);
        pow_a.push(BigInt::one());
        pow_c.push(BigInt::one());
        for i in 1..len {
            pow_a.push(&pow_a[i - 1] * &a);
            pow_c.push(&pow_c[i - 1] * &c);
        }
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(BigInt::zero());
        let mut choose = BigInt::one();
        for j in 0..len {
            let w = &choose * &pow_a[j] * &pow_c[len - 1 - j];
            let next = &prefix[j] + w;
            prefix.push(next);
            choose = choose * (n - j as u64) / (j as u64 + 1);
        }
        let denom = num_traits::pow(b, n as usize);
        debug_assert_eq!(prefix[len], denom);
        Self {
            n,
            p: p.clone(),
            denom,
            prefix,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> &RationalProb {
        &self.p
    }

    /// Common denominator `b^n`.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn weight(&self, j: u64) -> BigInt {
        self.range_sum(j as i64, j as i64)
    }

    /// Sum of weights over indices `lo..=hi`, clamped to `0..=n`.
    pub fn range_sum(&self, lo: i64, hi: i64) -> BigInt {
        let lo = lo.max(0);
        let hi = hi.min(self.n as i64);
        if lo > hi {
            return BigInt::zero();
        }
        &self.prefix[hi as usize + 1] - &self.prefix[lo as usize]
    }

    pub fn range_prob(&self, lo: i64, hi: i64) -> RationalProb {
        RationalProb::from_parts_unchecked(self.range_sum(lo, hi), self.denom.clone())
    }

    pub fn prob(&self, j: u64) -> RationalProb {
        self.range_prob(j as i64, j as i64)
    }
}
