//! Per-configuration certification of the group-decay theorems and the
//! tail bounds derived from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{regime, Result};
use crate::exact_binomial::{
    tail_probability, BernoulliGrid, BinomialWeights, Boundary, DiscreteGrid, Grid, GroupMasses, Side,
};

use super::enclosure::Enclosure;
use super::report::{CheckKind, RatioCheck, Relation, Suite, VerificationReport};
use super::VerifyOptions;

fn q(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn sum(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc + x)
}

/// Adjacent-group ratios `g_j / g_{j+1}`. Pairs that reach past the last
/// full group land in `separate`.
fn push_group_ratios(
    report: &mut VerificationReport,
    kind: CheckKind,
    groups: &[BigInt],
    full: usize,
    factor: &Enclosure,
) {
    for j in 1..groups.len() {
        let check = RatioCheck::new(kind, j as u64, &groups[j - 1], &groups[j], Relation::AtLeast, factor);
        if j < full {
            report.checks.push(check);
        } else {
            report.separate.push(check);
        }
    }
}

/// `(b - 1) * (g_2 + g_3 + ...) <= g_1`; vacuous with fewer than two groups.
fn push_consequence(report: &mut VerificationReport, groups: &[BigInt], has_short: bool, factor: &Enclosure) {
    if groups.len() < 2 {
        return;
    }
    let rest = sum(&groups[1..]);
    let check = RatioCheck::new(
        CheckKind::Consequence,
        0,
        &groups[0],
        &rest,
        Relation::AtLeast,
        &factor.sub(&BigRational::one()),
    );
    if has_short {
        report.separate.push(check);
    } else {
        report.checks.push(check);
    }
}

fn oriented_bernoulli(grid: &BernoulliGrid) -> (BernoulliGrid, bool) {
    if grid.r >= grid.s {
        (*grid, false)
    } else {
        (grid.mirrored(), true)
    }
}

fn oriented_discrete(grid: &DiscreteGrid) -> (DiscreteGrid, bool) {
    if 2 * grid.m >= grid.n {
        (*grid, false)
    } else {
        (grid.mirrored(), true)
    }
}

fn start(suite: Suite, grid: Grid, mirrored: bool, opts: &VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::new(suite, grid.to_string(), Some(grid), opts.precision_bits);
    report.mirrored = mirrored;
    if mirrored {
        report.notes.push(format!("reflected X -> 1 - X to {}", grid.mirrored()));
    }
    report
}

/// `b = exp(2 eps^2 n) = exp(2k / (r + s))` on a Bernoulli grid.
pub fn bernoulli_factor(grid: &BernoulliGrid, opts: &VerifyOptions) -> Enclosure {
    Enclosure::exp(&(grid.eps2_n() * BigRational::from_integer(2.into())), opts.precision_bits)
}

/// `exp(2 k^2 / n)`.
pub fn discrete_factor(n: u64, k: u64, opts: &VerifyOptions) -> Enclosure {
    Enclosure::exp(&q(2 * k * k, n), opts.precision_bits)
}

/// `exp(2 k^2 n / (n^2 + k^2))`, i.e. `exp(2 eps^2 n / (1 + eps^2))`.
pub fn discrete_left_factor(n: u64, k: u64, opts: &VerifyOptions) -> Enclosure {
    Enclosure::exp(&q(2 * k * k * n, n * n + k * k), opts.precision_bits)
}

/// Right groups decay by `b = exp(2 eps^2 n)`: `Z_j >= b Z_{j+1}` for
/// `j = 1..s-1`, and `(b-1) P_2 <= P_1` for the outer right mass.
/// Grids with `r < s` are reflected first.
pub fn check_theorem1(grid: &BernoulliGrid, opts: &VerifyOptions) -> VerificationReport {
    let (g, mirrored) = oriented_bernoulli(grid);
    let mut report = start(Suite::Theorem1, (*grid).into(), mirrored, opts);
    if g.s < 2 {
        report.notes.push("vacuous: a single right group".into());
        return report.finish();
    }
    let masses = GroupMasses::for_grid(&g.into());
    let b = bernoulli_factor(&g, opts);
    push_group_ratios(&mut report, CheckKind::RightRatio, &masses.right, masses.right_full, &b);
    push_consequence(&mut report, &masses.right, false, &b);
    report.finish()
}

/// Left groups decay by the same `b`: `S_j >= b S_{j+1}` for `j = 1..r-1`.
pub fn check_theorem2(grid: &BernoulliGrid, opts: &VerifyOptions) -> VerificationReport {
    let (g, mirrored) = oriented_bernoulli(grid);
    let mut report = start(Suite::Theorem2, (*grid).into(), mirrored, opts);
    if g.r < 2 {
        report.notes.push("vacuous: a single left group".into());
        return report.finish();
    }
    let masses = GroupMasses::for_grid(&g.into());
    let b = bernoulli_factor(&g, opts);
    push_group_ratios(&mut report, CheckKind::LeftRatio, &masses.left, masses.left_full, &b);
    push_consequence(&mut report, &masses.left, false, &b);
    report.finish()
}

pub(crate) fn theorem3_from_masses(
    grid: &DiscreteGrid,
    mirrored: bool,
    masses: &GroupMasses,
    factor: &Enclosure,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut report = start(Suite::Theorem3, (*grid).into(), mirrored, opts);
    if let Some(w) = masses.right_short {
        report.notes.push(format!("short terminal right group of width {w} reported separately"));
    }
    push_group_ratios(&mut report, CheckKind::RightRatio, &masses.right, masses.right_full, factor);
    push_consequence(&mut report, &masses.right, masses.right_short.is_some(), factor);
    report.finish()
}

pub(crate) fn theorem4_from_masses(
    grid: &DiscreteGrid,
    mirrored: bool,
    masses: &GroupMasses,
    factor: &Enclosure,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut report = start(Suite::Theorem4, (*grid).into(), mirrored, opts);
    if grid.k == 1 {
        report.notes.push("k = 1 uses the stronger factor exp(2 eps^2 n)".into());
    }
    if let Some(w) = masses.left_short {
        report.notes.push(format!("short terminal left group of width {w} reported separately"));
    }
    push_group_ratios(&mut report, CheckKind::LeftRatio, &masses.left, masses.left_full, factor);
    push_consequence(&mut report, &masses.left, masses.left_short.is_some(), factor);
    report.finish()
}

fn discrete_masses(g: &DiscreteGrid) -> GroupMasses {
    let w = BinomialWeights::new(g.n, &g.p());
    GroupMasses::from_weights(&w, g.m, g.k)
}

/// Right groups of a general discrete grid decay by `exp(2 eps^2 n)`.
/// Grids with `2m < n` are reflected first.
pub fn check_theorem3(grid: &DiscreteGrid, opts: &VerifyOptions) -> VerificationReport {
    let (g, mirrored) = oriented_discrete(grid);
    let factor = discrete_factor(g.n, g.k, opts);
    theorem3_from_masses(grid, mirrored, &discrete_masses(&g), &factor, opts)
}

/// Left groups of a general discrete grid decay by
/// `exp(2 eps^2 n / (1 + eps^2))`; `k = 1` uses `exp(2 eps^2 n)`.
pub fn check_theorem4(grid: &DiscreteGrid, opts: &VerifyOptions) -> VerificationReport {
    let (g, mirrored) = oriented_discrete(grid);
    let factor = if g.k == 1 {
        discrete_factor(g.n, g.k, opts)
    } else {
        discrete_left_factor(g.n, g.k, opts)
    };
    theorem4_from_masses(grid, mirrored, &discrete_masses(&g), &factor, opts)
}

pub(crate) fn corollary_from_masses(
    grid: Grid,
    mirrored: bool,
    masses: &GroupMasses,
    bound: &Enclosure,
    opts: &VerifyOptions,
) -> VerificationReport {
    let mut report = start(Suite::Corollaries, grid, mirrored, opts);
    report.checks.push(RatioCheck::new(
        CheckKind::TailBound,
        0,
        &masses.outer_mass(),
        &masses.denom,
        Relation::Below,
        bound,
    ));
    report.finish()
}

/// `exp(-2 k^2 n / (n^2 + k^2))`.
pub fn discrete_tail_bound(n: u64, k: u64, opts: &VerifyOptions) -> Enclosure {
    Enclosure::exp(&-q(2 * k * k * n, n * n + k * k), opts.precision_bits)
}

/// Exact strict two-sided tail at `eps = k/n` strictly below the
/// exponential bound: `exp(-2 eps^2 n)` on Bernoulli grids,
/// `exp(-2 eps^2 n / (1 + eps^2))` on discrete grids with `2 <= k < n`.
pub fn check_corollaries(grid: &Grid, opts: &VerifyOptions) -> Result<VerificationReport> {
    match grid {
        Grid::Bernoulli(b) => {
            let bound = Enclosure::exp(&-(b.eps2_n() * BigRational::from_integer(2.into())), opts.precision_bits);
            Ok(corollary_from_masses(*grid, false, &GroupMasses::for_grid(grid), &bound, opts))
        }
        Grid::Discrete(d) => {
            if d.k < 2 {
                return Err(regime(
                    "2 <= k < n, n <= 2m < 2n",
                    format!("k = {} is below 2", d.k),
                ));
            }
            let (g, mirrored) = oriented_discrete(d);
            let bound = discrete_tail_bound(g.n, g.k, opts);
            Ok(corollary_from_masses(*grid, mirrored, &discrete_masses(&g), &bound, opts))
        }
    }
}

/// Corollary checks on the `n = 33, m = 15` rows `k = 2..=15`, each also
/// comparing the weak tail (`|X̄ - p| >= eps`) against the same bound.
pub fn check_table1_corollaries(opts: &VerifyOptions) -> Vec<VerificationReport> {
    (2..=15u64)
        .map(|k| {
            let d = DiscreteGrid::new(33, 15, k).expect("valid table grid");
            let mut report = check_corollaries(&d.into(), opts).expect("k >= 2");
            let weak = tail_probability(33, &d.p(), &d.eps(), Side::Two, Boundary::Weak).expect("0 < p < 1");
            let (g, _) = oriented_discrete(&d);
            report.checks.push(RatioCheck::new(
                CheckKind::WeakTailBound,
                0,
                weak.numer(),
                weak.denom(),
                Relation::Below,
                &discrete_tail_bound(g.n, g.k, opts),
            ));
            report.finish()
        })
        .collect()
}

/// `P(X̄ - p > nu eps) <= exp(-n delta^2 / (2 p (1-p))) / 2` with
/// `delta = nu / (r + s)`: the upper tail when `r >= s`, the lower tail when
/// `r <= s`, both on symmetric grids.
pub fn check_one_sided(grid: &BernoulliGrid, nu: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    if nu == 0 {
        return Err(crate::error::domain("one-sided check needs nu >= 1"));
    }
    let (k, r, s) = (grid.k, grid.r, grid.s);
    let mut report = start(Suite::OneSided, (*grid).into(), false, opts);
    report.config = format!("{grid},nu={nu}");
    let x = q(k * nu * nu * (r + s), 2 * r * s);
    let bound = Enclosure::exp(&-x, opts.precision_bits).scale(&q(1, 2));
    let w = BinomialWeights::new(grid.n(), &grid.p());
    let (n, m, shift) = (grid.n() as i64, grid.m() as i64, (nu * k) as i64);
    if r >= s {
        let upper = w.range_sum(m + shift + 1, n);
        report
            .checks
            .push(RatioCheck::new(CheckKind::UpperTail, nu, &upper, w.denom(), Relation::AtMost, &bound));
    }
    if r <= s {
        let lower = w.range_sum(0, m - shift - 1);
        report
            .checks
            .push(RatioCheck::new(CheckKind::LowerTail, nu, &lower, w.denom(), Relation::AtMost, &bound));
    }
    Ok(report.finish())
}

/// `P(X̄ > p) <= 1/2` certified exactly. The weak form `P(X̄ >= p)` is
/// recorded separately and flagged in the notes when it exceeds one half.
pub fn check_median(grid: &Grid, opts: &VerifyOptions) -> VerificationReport {
    let (g, mirrored) = if grid.p_at_least_half() {
        (*grid, false)
    } else {
        (grid.mirrored(), true)
    };
    let mut report = start(Suite::Median, *grid, mirrored, opts);
    let w = BinomialWeights::new(g.n(), &g.p());
    let (n, m) = (g.n() as i64, g.m() as i64);
    let half = Enclosure::exact(&q(1, 2));
    report.checks.push(RatioCheck::new(
        CheckKind::MedianStrict,
        0,
        &w.range_sum(m + 1, n),
        w.denom(),
        Relation::AtMost,
        &half,
    ));
    let weak = RatioCheck::new(CheckKind::MedianWeak, 0, &w.range_sum(m, n), w.denom(), Relation::AtMost, &half);
    if weak.verdict != super::Verdict::Pass {
        report.notes.push("only the strict form P(X > p) <= 1/2 holds".into());
    }
    report.separate.push(weak);
    report.finish()
}
