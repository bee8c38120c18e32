use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use bernbound::bounds::{crossover_epsilon, general_discrete_bound, hoeffding_bound, log1p_lower};
use bernbound::exact_binomial::rational::parse_ratio;
use bernbound::exact_binomial::{
    group_decomposition, log_tail_probability, tail_probability, BernoulliGrid, Boundary, DiscreteGrid, Grid,
    RationalProb, Side,
};
use bernbound::samplesize::{min_n, PlanOptions};
use bernbound::verify::{
    check_lemma1, check_theorem1, check_theorem3, check_theorem4, Enclosure, Probe, Verdict, VerifyOptions,
};

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Exact rational Taylor bracket of `exp(x)` for `0 <= x <= 1`, using `e < 3`
/// for the Lagrange remainder.
fn taylor_bracket(x: &BigRational) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..60 {
        sum += &term;
        term = term * x / BigRational::from_integer((i + 1).into());
    }
    (sum.clone(), sum + term * BigRational::from_integer(3.into()))
}

fn prob(a: u64, b: u64) -> RationalProb {
    RationalProb::new(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosure_overlaps_taylor_bracket(a in 0i64..=1000, prec in 64u32..=256) {
        let x = q(a, 1000);
        let (lo, hi) = taylor_bracket(&x);
        let e = Enclosure::exp(&x, prec);
        prop_assert!(e.lower() <= hi && lo <= e.upper());
        // The bracket is far tighter than 2^-64, so its midpoint is inside.
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        prop_assert!(e.contains(&mid));
    }

    #[test]
    fn enclosure_width_is_bounded(a in -4000i64..=4000, b in 1i64..=100, prec in 16u32..=256) {
        let e = Enclosure::exp(&q(a, b), prec);
        let limit = BigRational::new(BigInt::one(), BigInt::one() << (prec - 2));
        prop_assert!(e.width() / e.lower() <= limit);
    }

    #[test]
    fn enclosures_nest_across_precision(a in -300i64..=300, b in 1i64..=50, p in 16u32..=96, extra in 1u32..=128) {
        let x = q(a, b);
        let coarse = Enclosure::exp(&x, p);
        let fine = Enclosure::exp(&x, p + extra);
        prop_assert!(coarse.lower() <= fine.upper() && fine.lower() <= coarse.upper());
    }

    #[test]
    fn certification_is_monotone_in_precision(k in 1u64..=4, r in 1u64..=8, s in 1u64..=8, p in 8u32..=64) {
        let grid = BernoulliGrid::new(k, r, s).unwrap();
        let low = check_theorem1(&grid, &VerifyOptions { precision_bits: p });
        let high = check_theorem1(&grid, &VerifyOptions { precision_bits: p + 64 });
        for (a, b) in low.checks.iter().zip(&high.checks) {
            if a.verdict == Verdict::Pass {
                prop_assert_eq!(b.verdict, Verdict::Pass);
            }
        }
    }

    #[test]
    fn reports_are_deterministic(n in 3u64..=60, m_frac in 0.0f64..1.0, k_frac in 0.0f64..1.0) {
        let m = 1 + ((n - 2) as f64 * m_frac) as u64;
        let k = 1 + ((n - 2) as f64 * k_frac) as u64;
        let grid = DiscreteGrid::new(n, m, k).unwrap();
        let opts = VerifyOptions::default();
        prop_assert_eq!(check_theorem3(&grid, &opts), check_theorem3(&grid, &opts));
        let t4 = check_theorem4(&grid, &opts);
        prop_assert_eq!(t4.summary.fail, 0);
    }

    #[test]
    fn groups_partition_unit_mass(n in 2u64..=80, m_frac in 0.0f64..1.0, k_frac in 0.0f64..1.0) {
        let m = 1 + ((n - 2) as f64 * m_frac) as u64;
        let k = 1 + ((n - 2) as f64 * k_frac) as u64;
        let grid: Grid = DiscreteGrid::new(n, m, k).unwrap().into();
        let d = group_decomposition(&grid);
        prop_assert_eq!(d.total(), RationalProb::one());
        // Reflection swaps the two sides.
        let mirrored = group_decomposition(&grid.mirrored());
        prop_assert_eq!(&d.left, &mirrored.right);
        prop_assert_eq!(&d.right, &mirrored.left);
    }

    #[test]
    fn tails_are_consistent(n in 1u64..=120, m in 1u64..=119, e in 1u64..=119) {
        prop_assume!(m < n + 1 && m > 0 && m < n);
        let p = prob(m, n);
        let eps = prob(e.min(n), n);
        let strict = tail_probability(n, &p, &eps, Side::Two, Boundary::Strict).unwrap();
        let weak = tail_probability(n, &p, &eps, Side::Two, Boundary::Weak).unwrap();
        prop_assert!(strict <= weak);
        let up = tail_probability(n, &p, &eps, Side::Upper, Boundary::Strict).unwrap();
        let lo = tail_probability(n, &p, &eps, Side::Lower, Boundary::Strict).unwrap();
        prop_assert_eq!(up.checked_add(&lo).unwrap(), strict.clone());
        let log = log_tail_probability(n, &p, &eps, Side::Two, Boundary::Strict).unwrap();
        if !strict.is_zero() {
            prop_assert!((log.log_value() - strict.ln()).abs() < 1e-9 * strict.ln().abs().max(1.0));
        }
    }

    #[test]
    fn log_lower_bound_holds(delta in 0.0f64..100.0) {
        prop_assert!(log1p_lower(delta).unwrap() <= delta.ln_1p() + 1e-15);
    }

    #[test]
    fn lemma_probes_pass(n in 1u64..=300, idx in 0usize..4) {
        let probe = Probe::ALL[idx];
        let r = check_lemma1(probe.curvature(), probe, n, &VerifyOptions::default()).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn decimal_and_fraction_inputs_agree(num in 0u64..=1000, digits in 0u32..=4) {
        let den = 10u64.pow(digits);
        let decimal = format!("{}.{:0>width$}", num / den, num % den, width = digits as usize);
        prop_assert_eq!(parse_ratio(&decimal).unwrap(), parse_ratio(&format!("{num}/{den}")).unwrap());
    }

    #[test]
    fn crossover_separates_the_bounds(n in 2u64..=100_000, below in 0.05f64..0.95, above in 1.05f64..1.5) {
        let mu = crossover_epsilon(n).mu;
        // Log space: both bounds underflow to zero for large n.
        let ln = |b: bernbound::bounds::BoundValue, eps: f64| b.alpha.ln() - b.beta * eps * eps * n as f64;
        let d = |eps: f64| ln(general_discrete_bound(n, eps), eps) - ln(hoeffding_bound(n, eps), eps);
        prop_assert!(d(mu * below) < 0.0);
        prop_assert!(d(mu * above) > 0.0);
    }

    #[test]
    fn planning_is_minimal(eps in 0.01f64..0.5, log_target in -10.0f64..-0.01) {
        let target = 10f64.powf(log_target);
        let plan = min_n(eps, target, bernbound::bounds::BoundFamily::GeneralDiscrete, &PlanOptions::default()).unwrap();
        prop_assert!(general_discrete_bound(plan.n, eps).value <= target);
        if plan.n > 1 {
            prop_assert!(general_discrete_bound(plan.n - 1, eps).value > target);
        }
        let forced = PlanOptions { force_bisection: true, ..PlanOptions::default() };
        let bisected = min_n(eps, target, bernbound::bounds::BoundFamily::GeneralDiscrete, &forced).unwrap();
        prop_assert_eq!(plan.n, bisected.n);
    }
}
