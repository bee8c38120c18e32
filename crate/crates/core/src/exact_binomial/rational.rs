//! Exact probabilities over arbitrary-size integers, plus the parsing and
//! formatting helpers shared by the rest of the crate.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// A probability held exactly as a ratio of big integers, always in lowest
/// terms and always inside `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalProb(BigRational);

impl RationalProb {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(domain("probability with zero denominator"));
        }
        Self::from_ratio(BigRational::new(numer.into(), denom))
    }

    pub fn from_ratio(ratio: BigRational) -> Result<Self> {
        if ratio.is_negative() || ratio > BigRational::one() {
            return Err(domain(format!("{ratio} is not a probability")));
        }
        Ok(Self(ratio))
    }

    /// Builds from a numerator/denominator pair already known to satisfy
    /// `0 <= numer <= denom`; reduces to lowest terms.
    pub(crate) fn from_parts_unchecked(numer: BigInt, denom: BigInt) -> Self {
        debug_assert!(!denom.is_zero() && !numer.is_negative() && numer <= denom);
        Self(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `1 - p`.
    pub fn complement(&self) -> Self {
        Self(BigRational::one() - &self.0)
    }

    /// Exact sum, failing if the result leaves `[0, 1]`.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::from_ratio(&self.0 + &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        ln_ratio(self.numer(), self.denom())
    }

    /// Decimal string with `digits` places, rounded half away from zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_fixed(&self.0, digits)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_ratio(parse_ratio(s)?)
    }
}

impl fmt::Display for RationalProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for RationalProb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Mul for &RationalProb {
    type Output = RationalProb;

    fn mul(self, rhs: Self) -> RationalProb {
        RationalProb(&self.0 * &rhs.0)
    }
}

impl Serialize for RationalProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `"0.125"` into an
/// exact rational. Decimals are read digit by digit, never through `f64`.
pub fn parse_ratio(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let fail = |reason: &str| Error::Parse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| fail("bad numerator"))?;
        let b: BigInt = b.trim().parse().map_err(|_| fail("bad denominator"))?;
        if b.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(BigRational::new(a, b));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail("empty number"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(fail("expected a/b or a decimal number"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| fail("bad digits"))?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match r.to_f64() {
        Some(v) if v.is_finite() && v != 0.0 => v,
        // Fall back to logs when the direct conversion under/overflows.
        _ => {
            let sign = if r.is_negative() { -1.0 } else { 1.0 };
            sign * ln_ratio(&r.numer().abs(), r.denom()).exp()
        }
    }
}

/// Natural log of a non-negative big integer; `-inf` at zero.
pub fn ln_bigint(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(numer / denom)` for non-negative values.
pub fn ln_ratio(numer: &BigInt, denom: &BigInt) -> f64 {
    ln_bigint(numer) - ln_bigint(denom)
}

/// Fixed-point decimal rendering with round-half-away-from-zero.
pub fn format_fixed(r: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits as usize);
    let negative = r.is_negative();
    let numer = r.numer().abs() * &scale * 2u32 + r.denom();
    let rounded = numer.div_floor(&(r.denom() * 2u32));
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if negative && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part.to_string(),
        width = digits as usize
    )
}

/// Scientific rendering `d.ddd…e±X` with `sig` significant digits, exact
/// (no pass through `f64`), for a non-negative ratio `numer / denom`.
pub fn format_sci(numer: &BigInt, denom: &BigInt, sig: u32) -> String {
    if numer.is_zero() {
        return format!("{:.*}e0", sig.saturating_sub(1) as usize, 0.0);
    }
    let ten = BigInt::from(10u32);
    let sig = sig.max(1);
    // Initial guess of the decimal exponent, corrected below.
    let mut exp10 = ((ln_ratio(numer, denom)) / std::f64::consts::LN_10).floor() as i64;
    loop {
        // value / 10^(exp10 - sig + 1), rounded.
        let shift = exp10 - sig as i64 + 1;
        let (n, d) = if shift >= 0 {
            (numer.clone(), denom * num_traits::pow(ten.clone(), shift as usize))
        } else {
            (numer * num_traits::pow(ten.clone(), (-shift) as usize), denom.clone())
        };
        let mant = (n * 2u32 + &d).div_floor(&(d * 2u32));
        let lower = num_traits::pow(ten.clone(), (sig - 1) as usize);
        let upper = &lower * &ten;
        if mant < lower {
            exp10 -= 1;
        } else if mant >= upper {
            exp10 += 1;
        } else {
            let digits = mant.to_string();
            let (head, tail) = digits.split_at(1);
            return if tail.is_empty() {
                format!("{head}e{exp10}")
            } else {
                format!("{head}.{tail}e{exp10}")
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_identically() {
        assert_eq!(parse_ratio("1/2").unwrap(), parse_ratio("0.5").unwrap());
        assert_eq!(parse_ratio("15/33").unwrap(), parse_ratio("5/11").unwrap());
        assert_eq!(parse_ratio("0.125").unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(parse_ratio("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(parse_ratio(".25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
        assert!(parse_ratio("").is_err());
    }

    #[test]
    fn rejects_values_outside_unit_interval() {
        assert!(RationalProb::parse("3/2").is_err());
        assert!(RationalProb::parse("-1/2").is_err());
        assert!(RationalProb::parse("1").is_ok());
    }

    #[test]
    fn lowest_terms() {
        let p = RationalProb::new(6, 12).unwrap();
        assert_eq!(p.to_string(), "1/2");
    }

    #[test]
    fn fixed_rounding_is_half_away_from_zero() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(format_fixed(&r(1, 8), 2), "0.13");
        assert_eq!(format_fixed(&r(-1, 8), 2), "-0.13");
        assert_eq!(format_fixed(&r(1, 3), 6), "0.333333");
        assert_eq!(format_fixed(&r(2, 3), 0), "1");
        assert_eq!(format_fixed(&r(0, 1), 3), "0.000");
        assert_eq!(format_fixed(&r(1, 1_000_000_000), 6), "0.000000");
    }

    #[test]
    fn scientific_formatting() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(format_sci(&b(1), &b(3), 4), "3.333e-1");
        assert_eq!(format_sci(&b(12345), &b(1), 3), "1.23e4");
        assert_eq!(format_sci(&b(99999), &b(1), 3), "1.00e5");
        assert_eq!(format_sci(&b(1), &b(1), 1), "1e0");
        let huge = num_traits::pow(BigInt::from(10), 400);
        assert_eq!(format_sci(&huge, &b(7), 3), "1.43e399");
    }

    #[test]
    fn logs_of_huge_integers() {
        let x = num_traits::pow(BigInt::from(3), 2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_bigint(&x) - expected).abs() < 1e-9 * expected);
        let r = BigRational::new(BigInt::one(), x);
        assert!(ratio_to_f64(&r) == 0.0 || ratio_to_f64(&r) < 1e-300);
    }
}
