//! Discrete Jensen-type sum inequalities on a fixed probe catalog, and the
//! logarithm lower bound `ln(1 + delta) >= 2 delta / (2 + delta)`.
//!
//! For a convex probe `Σ_{j=1}^n φ(j) >= n φ((n+1)/2)`; for a concave one
//! `Σ_{j=1}^n φ(j) >= n (φ(1) + φ(n)) / 2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact_binomial::rational::ratio_to_f64;

use super::enclosure::Enclosure;
use super::report::{CheckKind, RatioCheck, Relation, Suite, Verdict, VerificationReport};
use super::VerifyOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Convex,
    Concave,
}

/// Probe functions; each has a fixed curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    /// `1/t`
    Reciprocal,
    /// `-ln t`
    NegLog,
    /// `ln t`
    Log,
    /// `sqrt t`
    Sqrt,
}

impl Probe {
    pub const ALL: [Probe; 4] = [Probe::Reciprocal, Probe::NegLog, Probe::Log, Probe::Sqrt];

    pub fn curvature(&self) -> Curvature {
        match self {
            Probe::Reciprocal | Probe::NegLog => Curvature::Convex,
            Probe::Log | Probe::Sqrt => Curvature::Concave,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Probe::Reciprocal => "reciprocal",
            Probe::NegLog => "neg-log",
            Probe::Log => "log",
            Probe::Sqrt => "sqrt",
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Probe::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::Parse {
            input: s.into(),
            reason: "expected reciprocal, neg-log, log or sqrt".into(),
        })
    }
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, j| acc * j)
}

// Fixed-point bits for the square-root sums.
const SQRT_BITS: u64 = 64;

/// Certifies the sum inequality for `probe` at `n`. Every probe except the
/// square root reduces to an exact integer comparison, reported as
/// `lhs >= 1` against an exact one. The square root uses integer square
/// roots at `SQRT_BITS` fractional bits with directed rounding.
pub fn check_lemma1(kind: Curvature, probe: Probe, n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    if probe.curvature() != kind {
        return Err(domain(format!("probe {probe} is not {kind:?}").to_lowercase()));
    }
    if n == 0 {
        return Err(domain("lemma check needs n >= 1"));
    }
    let mut report = VerificationReport::new(
        Suite::Lemma1,
        format!("lemma1(probe={probe},n={n})"),
        None,
        opts.precision_bits,
    );
    let one = Enclosure::exact(&BigRational::one());
    let check = match probe {
        Probe::Reciprocal => {
            // Σ 1/j = (Σ n!/j) / n! >= 2n/(n+1)
            let f = factorial(n);
            let harmonic = (1..=n).fold(BigInt::zero(), |acc, j| acc + &f / j);
            RatioCheck::new(CheckKind::Lemma, n, &(harmonic * (n + 1)), &(f * (2 * n)), Relation::AtLeast, &one)
        }
        Probe::NegLog => {
            // -ln n! >= -n ln((n+1)/2)  <=>  (n+1)^n / (2^n n!) >= 1
            let lhs = num_traits::pow(BigInt::from(n + 1), n as usize);
            let rhs = (BigInt::one() << n) * factorial(n);
            RatioCheck::new(CheckKind::Lemma, n, &lhs, &rhs, Relation::AtLeast, &one)
        }
        Probe::Log => {
            // ln n! >= n ln(n) / 2  <=>  (n!)^2 / n^n >= 1
            let f = factorial(n);
            let rhs = num_traits::pow(BigInt::from(n), n as usize);
            RatioCheck::new(CheckKind::Lemma, n, &(&f * &f), &rhs, Relation::AtLeast, &one)
        }
        Probe::Sqrt => sqrt_check(n),
    };
    report.checks.push(check);
    Ok(report.finish())
}

/// `Σ sqrt(j) >= n (1 + sqrt n) / 2` via floor/ceil integer square roots.
/// The end terms cancel, leaving `2 Σ_{j=2}^{n-1} sqrt(j) >= (n-2)(1 + sqrt n)`,
/// which is an exact equality for `n <= 2`.
fn sqrt_check(n: u64) -> RatioCheck {
    if n <= 2 {
        let one = BigInt::one();
        return RatioCheck::new(
            CheckKind::Lemma,
            n,
            &one,
            &one,
            Relation::AtLeast,
            &Enclosure::exact(&BigRational::one()),
        );
    }
    let scale = BigInt::one() << (2 * SQRT_BITS);
    let unit = BigInt::one() << SQRT_BITS;
    let floor_ceil = |j: u64| {
        let x = &scale * j;
        let root = x.sqrt();
        let up = if &root * &root == x { root.clone() } else { &root + 1u32 };
        (root, up)
    };
    let (mut lhs_lo, mut lhs_hi) = (BigInt::zero(), BigInt::zero());
    for j in 2..n {
        let (lo, hi) = floor_ceil(j);
        lhs_lo += lo * 2u32;
        lhs_hi += hi * 2u32;
    }
    let (root_lo, root_hi) = floor_ceil(n);
    let rhs_lo = (&unit + root_lo) * (n - 2);
    let rhs_hi = (&unit + root_hi) * (n - 2);
    let verdict = if lhs_lo >= rhs_hi {
        Verdict::Pass
    } else if lhs_hi < rhs_lo {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let width = ratio_to_f64(&BigRational::new(&rhs_hi - &rhs_lo, rhs_lo));
    let lhs = BigRational::new_raw(lhs_lo, rhs_hi);
    let margin = ratio_to_f64(&lhs).ln();
    RatioCheck {
        kind: CheckKind::Lemma,
        j: n,
        lhs,
        relation: Relation::AtLeast,
        required: 1.0,
        width,
        verdict,
        margin,
    }
}

/// Certifies `1 + delta >= exp(2 delta / (2 + delta))` at
/// `delta = i * delta_max / steps` for `i = 0..=steps`.
pub fn check_log1p_lower_grid(delta_max: &BigRational, steps: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    if steps == 0 || *delta_max < BigRational::zero() {
        return Err(domain("delta grid needs steps >= 1 and delta_max >= 0"));
    }
    let mut report = VerificationReport::new(
        Suite::Lemma1,
        format!("log1p-lower(delta_max={delta_max},steps={steps})"),
        None,
        opts.precision_bits,
    );
    let two = BigRational::from_integer(2.into());
    for i in 0..=steps {
        let delta = delta_max * BigRational::new(i.into(), steps.into());
        let x = &two * &delta / (&two + &delta);
        let rhs = Enclosure::exp(&x, opts.precision_bits);
        let lhs = BigRational::one() + delta;
        report
            .checks
            .push(RatioCheck::new(CheckKind::Log1pLower, i, lhs.numer(), lhs.denom(), Relation::AtLeast, &rhs));
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn hand_examples() {
        // 1 + 1/2 + 1/3 = 11/6 >= 3/2
        let r = check_lemma1(Curvature::Convex, Probe::Reciprocal, 3, &opts()).unwrap();
        assert!(r.passed());
        assert!((r.checks[0].lhs_f64() - (11.0 / 6.0) / 1.5).abs() < 1e-12);
        // ln 24 >= ln 16
        let r = check_lemma1(Curvature::Concave, Probe::Log, 4, &opts()).unwrap();
        assert!((r.checks[0].lhs_f64() - 576.0 / 256.0).abs() < 1e-12);
    }

    #[test]
    fn single_term_is_equality() {
        for probe in Probe::ALL {
            let r = check_lemma1(probe.curvature(), probe, 1, &opts()).unwrap();
            assert!(r.passed(), "{probe}");
            assert!(r.checks[0].margin.abs() < 1e-12, "{probe}");
        }
    }

    #[test]
    fn curvature_mismatch_is_an_error() {
        assert!(check_lemma1(Curvature::Concave, Probe::Reciprocal, 3, &opts()).is_err());
        assert!(check_lemma1(Curvature::Convex, Probe::Sqrt, 3, &opts()).is_err());
    }

    #[test]
    fn sqrt_against_float() {
        for n in [2u64, 9, 50, 1000] {
            let r = check_lemma1(Curvature::Concave, Probe::Sqrt, n, &opts()).unwrap();
            assert!(r.passed());
            let lhs: f64 = 2.0 * (2..n).map(|j| (j as f64).sqrt()).sum::<f64>();
            let rhs = (n - 2) as f64 * (1.0 + (n as f64).sqrt());
            let expected = if n == 2 { 1.0 } else { lhs / rhs };
            assert!((r.checks[0].lhs_f64() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn log1p_grid() {
        let r = check_log1p_lower_grid(&BigRational::from_integer(100.into()), 200, &opts()).unwrap();
        assert_eq!(r.checks.len(), 201);
        assert!(r.passed());
        // delta = 0 is an exact equality.
        assert_eq!(r.checks[0].margin, 0.0);
    }
}
