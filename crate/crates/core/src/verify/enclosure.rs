//! Rigorous two-sided enclosures of `exp(x)` for rational `x`.
//!
//! Values are fixed-point big integers over a shared power-of-two
//! denominator; every rounding step is directed (floor for the lower end,
//! ceiling for the upper end), so the true value always lies inside.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact_binomial::rational::ratio_to_f64;

use super::report::{Relation, Verdict};

/// Closed interval `[lo/den, hi/den]` with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    den: BigInt,
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    Integer::div_ceil(a, b)
}

impl Enclosure {
    /// Degenerate interval around an exactly known rational.
    pub fn exact(value: &BigRational) -> Self {
        Self {
            lo: value.numer().clone(),
            hi: value.numer().clone(),
            den: value.denom().clone(),
        }
    }

    /// Encloses `exp(x)`. The relative width stays well below
    /// `2^(2 - precision_bits)`.
    pub fn exp(x: &BigRational, precision_bits: u32) -> Self {
        if x.is_negative() {
            return Self::exp(&-x, precision_bits).recip();
        }
        // Halve the argument s times so that y = x / 2^s <= 1/2.
        let ceil_x = x.ceil().to_integer();
        let s = ceil_x.bits() as u32 + 1;
        let work = precision_bits as u64 + 32 + 2 * s as u64;
        let one = BigInt::one() << work;

        let y_num = x.numer() << work;
        let y_den = x.denom() << s;
        let y_lo = y_num.div_floor(&y_den);
        let y_hi = ceil_div(&y_num, &y_den);

        // Lower: truncated series with every term rounded down.
        let mut sum_lo = one.clone();
        let mut term = one.clone();
        let mut i = 1u64;
        loop {
            term = (&term * &y_lo).div_floor(&(&one * i));
            if term.is_zero() {
                break;
            }
            sum_lo += &term;
            i += 1;
        }

        // Upper: terms rounded up; once a term is at most one unit the rest
        // of the series is bounded by that term again (ratio <= 1/2).
        let mut sum_hi = one.clone();
        let mut term = one.clone();
        let mut i = 1u64;
        loop {
            term = ceil_div(&(&term * &y_hi), &(&one * i));
            sum_hi += &term;
            if term <= BigInt::one() {
                sum_hi += &term;
                break;
            }
            i += 1;
        }

        let mut lo = sum_lo;
        let mut hi = sum_hi;
        for _ in 0..s {
            lo = (&lo * &lo) >> work;
            hi = ceil_div(&(&hi * &hi), &one);
        }
        Self { lo, hi, den: one }
    }

    /// `1 / value` for an enclosure of a positive value.
    fn recip(&self) -> Self {
        assert!(self.lo.is_positive(), "reciprocal of an enclosure touching zero");
        // Scale so the reciprocal keeps as many significant bits as the input.
        let extra = self.hi.bits().max(self.den.bits());
        let new_den = BigInt::one() << (extra + self.den.bits());
        let num = &new_den * &self.den;
        Self {
            lo: num.div_floor(&self.hi),
            hi: ceil_div(&num, &self.lo),
            den: new_den,
        }
    }

    /// Multiplies by a positive rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        assert!(factor.is_positive(), "scale factor must be positive");
        let (u, v) = (factor.numer(), factor.denom());
        Self {
            lo: (&self.lo * u).div_floor(v),
            hi: ceil_div(&(&self.hi * u), v),
            den: self.den.clone(),
        }
    }

    /// `value - c` for rational `c`.
    pub fn sub(&self, c: &BigRational) -> Self {
        let shift_lo = (c.numer() * &self.den).div_floor(c.denom());
        let shift_hi = ceil_div(&(c.numer() * &self.den), c.denom());
        Self {
            lo: &self.lo - shift_hi,
            hi: &self.hi - shift_lo,
            den: self.den.clone(),
        }
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), self.den.clone())
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), self.den.clone())
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, self.den.clone())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, value: &BigRational) -> bool {
        *value >= self.lower() && *value <= self.upper()
    }

    pub fn midpoint_f64(&self) -> f64 {
        ratio_to_f64(&BigRational::new(&self.lo + &self.hi, &self.den * 2u32))
    }

    pub fn width_f64(&self) -> f64 {
        ratio_to_f64(&self.width())
    }

    /// Certified comparison of `numer/denom` (non-negative, `denom > 0`)
    /// against the enclosed value.
    pub fn verdict(&self, numer: &BigInt, denom: &BigInt, relation: Relation) -> Verdict {
        let lhs = numer * &self.den;
        let lo = &self.lo * denom;
        let hi = &self.hi * denom;
        let (pass, fail) = match relation {
            Relation::AtLeast => (lhs >= hi, lhs < lo),
            Relation::Below => (lhs < lo, lhs >= hi),
            Relation::AtMost => (lhs <= lo, lhs > hi),
        };
        if pass {
            Verdict::Pass
        } else if fail {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// Independent route: exact rational Taylor polynomial of `exp(x)` for
    /// `0 <= x <= 1` with the Lagrange remainder bound `e x^(N+1)/(N+1)!`,
    /// using `e < 3`.
    fn taylor_oracle(x: &BigRational, terms: u64) -> (BigRational, BigRational) {
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        for i in 0..terms {
            sum += &term;
            term = term * x / BigRational::from_integer((i + 1).into());
        }
        let remainder = term * BigRational::from_integer(3.into());
        (sum.clone(), sum + remainder)
    }

    #[test]
    fn exp_zero_is_one() {
        let e = Enclosure::exp(&q(0, 1), 64);
        assert!(e.contains(&BigRational::one()));
        assert!(e.width_f64() < 1e-30);
    }

    #[test]
    fn matches_exact_taylor_oracle() {
        for (a, b) in [(1, 3), (4, 5), (1, 1), (7, 10), (1, 1000)] {
            let x = q(a, b);
            let (olo, ohi) = taylor_oracle(&x, 40);
            let e = Enclosure::exp(&x, 128);
            // Both enclose the same number, so they must overlap, and the
            // oracle's midpoint is within the combined widths.
            assert!(e.lower() <= ohi && olo <= e.upper(), "x={x}");
            let mid = (&olo + &ohi) / BigRational::from_integer(2.into());
            assert!(e.contains(&mid) || (&mid - e.upper()).abs() <= &ohi - &olo + e.width());
        }
    }

    #[test]
    fn agrees_with_float_exp() {
        for (a, b) in [(8, 10), (400, 1), (-400, 1), (2, 33), (-121, 10), (3, 7)] {
            let x = q(a, b);
            let e = Enclosure::exp(&x, 128);
            let f = (a as f64 / b as f64).exp();
            assert!((e.midpoint_f64() / f - 1.0).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn width_is_within_precision() {
        for prec in [32u32, 64, 128, 256] {
            for (a, b) in [(8, 10), (400, 1), (-400, 1), (2, 33), (-3, 2)] {
                let e = Enclosure::exp(&q(a, b), prec);
                let rel = e.width() / e.lower();
                let limit = BigRational::new(BigInt::one(), BigInt::one() << (prec - 2));
                assert!(rel <= limit, "prec={prec} x={a}/{b}");
            }
        }
    }

    #[test]
    fn higher_precision_overlaps_lower() {
        let x = q(17, 9);
        let coarse = Enclosure::exp(&x, 40);
        let fine = Enclosure::exp(&x, 200);
        assert!(coarse.lower() <= fine.upper() && fine.lower() <= coarse.upper());
        assert!(fine.width() < coarse.width());
    }

    #[test]
    fn verdicts() {
        let e = Enclosure::exp(&q(1, 1), 64); // e ~ 2.718
        let b = |x: i64| BigInt::from(x);
        assert_eq!(e.verdict(&b(3), &b(1), Relation::AtLeast), Verdict::Pass);
        assert_eq!(e.verdict(&b(2), &b(1), Relation::AtLeast), Verdict::Fail);
        assert_eq!(e.verdict(&b(2), &b(1), Relation::Below), Verdict::Pass);
        assert_eq!(e.verdict(&b(3), &b(1), Relation::AtMost), Verdict::Fail);
        let exact = Enclosure::exact(&q(1, 2));
        assert_eq!(exact.verdict(&b(1), &b(2), Relation::AtMost), Verdict::Pass);
        assert_eq!(exact.verdict(&b(1), &b(2), Relation::Below), Verdict::Fail);
        assert_eq!(exact.verdict(&b(1), &b(2), Relation::AtLeast), Verdict::Pass);
        // A rational that sits inside a wide enclosure is inconclusive.
        let wide = Enclosure::exp(&q(1, 1), 4);
        let mid = wide.lower() + wide.width() / BigRational::from_integer(2.into());
        assert_eq!(
            wide.verdict(mid.numer(), mid.denom(), Relation::AtLeast),
            if wide.is_exact() { Verdict::Pass } else { Verdict::Inconclusive }
        );
    }

    #[test]
    fn scale_and_shift() {
        let e = Enclosure::exp(&q(-1, 1), 128).scale(&q(1, 2));
        assert!((e.midpoint_f64() - 0.5 * (-1f64).exp()).abs() < 1e-16);
        let b = Enclosure::exp(&q(1, 1), 128).sub(&BigRational::one());
        assert!((b.midpoint_f64() - (1f64.exp() - 1.0)).abs() < 1e-15);
    }
}
