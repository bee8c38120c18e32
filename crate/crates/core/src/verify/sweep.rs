//! Parallel sweeps over parameter grids. Each configuration is checked
//! independently; summaries merge in any order and the retained reports
//! are sorted by configuration before they are returned.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact_binomial::{BernoulliGrid, BinomialWeights, DiscreteGrid, GroupMasses};

use super::checks::{
    check_corollaries, check_median, check_one_sided, check_theorem1, check_theorem2, corollary_from_masses,
    discrete_factor, discrete_left_factor, discrete_tail_bound, theorem3_from_masses, theorem4_from_masses,
};
use super::lemma::{check_lemma1, check_log1p_lower_grid, Probe};
use super::report::{Suite, Summary, VerificationReport};
use super::VerifyOptions;

/// Aggregate of a sweep. Only reports with a non-pass counted check are kept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub suite: Suite,
    pub configs: u64,
    pub summary: Summary,
    /// Checks on short groups and non-binding forms.
    pub separate: Summary,
    /// Smallest log-domain slack among counted checks.
    pub min_margin: Option<f64>,
    pub min_margin_config: Option<String>,
    pub flagged: Vec<VerificationReport>,
}

impl SweepSummary {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            configs: 0,
            summary: Summary::default(),
            separate: Summary::default(),
            min_margin: None,
            min_margin_config: None,
            flagged: Vec::new(),
        }
    }

    fn offer_margin(&mut self, margin: f64, config: &str) {
        let better = match (self.min_margin, self.min_margin_config.as_deref()) {
            (Some(m), Some(c)) => margin < m || (margin == m && config < c),
            _ => true,
        };
        if better {
            self.min_margin = Some(margin);
            self.min_margin_config = Some(config.to_string());
        }
    }

    pub fn absorb(&mut self, report: VerificationReport) {
        self.configs += 1;
        self.summary.add(&report.summary);
        self.separate.add(&Summary::of(&report.separate));
        if let Some(m) = report.checks.iter().map(|c| c.margin).reduce(f64::min) {
            self.offer_margin(m, &report.config);
        }
        if !report.passed() {
            self.flagged.push(report);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.configs += other.configs;
        self.summary.add(&other.summary);
        self.separate.add(&other.separate);
        if let (Some(m), Some(c)) = (other.min_margin, other.min_margin_config.as_deref()) {
            self.offer_margin(m, c);
        }
        self.flagged.extend(other.flagged);
        self
    }

    fn sorted(mut self) -> Self {
        self.flagged
            .sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self
    }

    /// No counted check failed.
    pub fn no_failures(&self) -> bool {
        self.summary.fail == 0
    }

    /// Every counted check passed.
    pub fn all_pass(&self) -> bool {
        self.summary.all_pass()
    }
}

fn collect<I>(suite: Suite, reports: I) -> SweepSummary
where
    I: ParallelIterator<Item = VerificationReport>,
{
    reports
        .fold(
            || SweepSummary::new(suite),
            |mut acc, r| {
                acc.absorb(r);
                acc
            },
        )
        .reduce(|| SweepSummary::new(suite), SweepSummary::merge)
        .sorted()
}

fn bernoulli_grids(kmax: u64, rsmax: u64) -> Vec<BernoulliGrid> {
    let mut out = Vec::new();
    for k in 1..=kmax {
        for r in 1..=rsmax {
            for s in 1..=rsmax {
                out.push(BernoulliGrid { k, r, s });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernoulliSweep {
    pub theorem1: SweepSummary,
    pub theorem2: SweepSummary,
    pub corollaries: SweepSummary,
}

/// Right- and left-group decay and the tail corollary over
/// `k <= kmax`, `r, s <= rsmax`.
pub fn sweep_bernoulli(kmax: u64, rsmax: u64, opts: &VerifyOptions) -> BernoulliSweep {
    let grids = bernoulli_grids(kmax, rsmax);
    BernoulliSweep {
        theorem1: collect(Suite::Theorem1, grids.par_iter().map(|g| check_theorem1(g, opts))),
        theorem2: collect(Suite::Theorem2, grids.par_iter().map(|g| check_theorem2(g, opts))),
        corollaries: collect(
            Suite::Corollaries,
            grids
                .par_iter()
                .map(|g| check_corollaries(&(*g).into(), opts).expect("Bernoulli grids are always in regime")),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteSweep {
    pub theorem3: SweepSummary,
    pub theorem4: SweepSummary,
    pub corollaries: SweepSummary,
}

/// Group decay on every discrete grid with `2 <= n <= nmax`,
/// `n/2 <= m < n`, `1 <= k < n`, plus the tail corollary for `k >= 2`.
/// The binomial weights are built once per `(n, m)`.
pub fn sweep_discrete(nmax: u64, opts: &VerifyOptions) -> DiscreteSweep {
    let pairs: Vec<(u64, u64)> = (2..=nmax).flat_map(|n| (n.div_ceil(2)..n).map(move |m| (n, m))).collect();
    let factors: Vec<Vec<_>> = (0..=nmax)
        .into_par_iter()
        .map(|n| {
            (1..n.max(1))
                .map(|k| {
                    let left = if k == 1 {
                        discrete_factor(n, k, opts)
                    } else {
                        discrete_left_factor(n, k, opts)
                    };
                    (discrete_factor(n, k, opts), left, discrete_tail_bound(n, k, opts))
                })
                .collect()
        })
        .collect();
    let per_pair = |&(n, m): &(u64, u64)| {
        let grid = DiscreteGrid { n, m, k: 1 };
        let w = BinomialWeights::new(n, &grid.p());
        let mut t3 = SweepSummary::new(Suite::Theorem3);
        let mut t4 = SweepSummary::new(Suite::Theorem4);
        let mut co = SweepSummary::new(Suite::Corollaries);
        for k in 1..n {
            let g = DiscreteGrid { n, m, k };
            let masses = GroupMasses::from_weights(&w, m, k);
            let (right, left, tail) = &factors[n as usize][(k - 1) as usize];
            t3.absorb(theorem3_from_masses(&g, false, &masses, right, opts));
            t4.absorb(theorem4_from_masses(&g, false, &masses, left, opts));
            if k >= 2 {
                co.absorb(corollary_from_masses(g.into(), false, &masses, tail, opts));
            }
        }
        (t3, t4, co)
    };
    let (t3, t4, co) = pairs.par_iter().map(per_pair).reduce(
        || {
            (
                SweepSummary::new(Suite::Theorem3),
                SweepSummary::new(Suite::Theorem4),
                SweepSummary::new(Suite::Corollaries),
            )
        },
        |a, b| (a.0.merge(b.0), a.1.merge(b.1), a.2.merge(b.2)),
    );
    DiscreteSweep {
        theorem3: t3.sorted(),
        theorem4: t4.sorted(),
        corollaries: co.sorted(),
    }
}

/// One-sided tails over `k <= kmax`, `s <= r <= rsmax`, `1 <= nu <= s`.
pub fn sweep_one_sided(kmax: u64, rsmax: u64, opts: &VerifyOptions) -> SweepSummary {
    let cases: Vec<(BernoulliGrid, u64)> = bernoulli_grids(kmax, rsmax)
        .into_iter()
        .filter(|g| g.r >= g.s)
        .flat_map(|g| (1..=g.s).map(move |nu| (g, nu)))
        .collect();
    collect(
        Suite::OneSided,
        cases
            .par_iter()
            .map(|(g, nu)| check_one_sided(g, *nu, opts).expect("nu >= 1")),
    )
}

/// Median checks on Bernoulli grids with `p >= 1/2`.
pub fn sweep_median(kmax: u64, rsmax: u64, opts: &VerifyOptions) -> SweepSummary {
    let grids: Vec<_> = bernoulli_grids(kmax, rsmax).into_iter().filter(|g| g.r >= g.s).collect();
    collect(Suite::Median, grids.par_iter().map(|g| check_median(&(*g).into(), opts)))
}

/// The probe catalog for `n <= nmax` plus the logarithm bound on
/// `delta = i * delta_max / delta_steps`.
pub fn sweep_lemma1(nmax: u64, delta_max: &BigRational, delta_steps: u64, opts: &VerifyOptions) -> Result<SweepSummary> {
    let cases: Vec<(Probe, u64)> = Probe::ALL
        .into_iter()
        .flat_map(|p| (1..=nmax).map(move |n| (p, n)))
        .collect();
    let reports: Vec<VerificationReport> = cases
        .par_iter()
        .map(|&(p, n)| check_lemma1(p.curvature(), p, n, opts))
        .collect::<Result<_>>()?;
    let mut summary = collect(Suite::Lemma1, reports.into_par_iter());
    summary.absorb(check_log1p_lower_grid(delta_max, delta_steps, opts)?);
    Ok(summary.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let opts = VerifyOptions::default();
        let b = sweep_bernoulli(2, 4, &opts);
        assert_eq!(b.theorem1.configs, 32);
        assert!(b.theorem1.all_pass() && b.theorem2.all_pass() && b.corollaries.all_pass());
        let d = sweep_discrete(20, &opts);
        assert!(d.theorem3.all_pass() && d.theorem4.all_pass() && d.corollaries.all_pass());
        assert!(d.theorem3.min_margin.unwrap() > 0.0);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let opts = VerifyOptions::default();
        let a = sweep_discrete(16, &opts);
        let b = sweep_discrete(16, &opts);
        assert_eq!(a, b);
        assert_eq!(sweep_one_sided(2, 4, &opts), sweep_one_sided(2, 4, &opts));
    }

    #[test]
    fn discrete_sweep_matches_single_checks() {
        let opts = VerifyOptions::default();
        let d = sweep_discrete(12, &opts);
        let mut t3 = SweepSummary::new(Suite::Theorem3);
        for n in 2..=12u64 {
            for m in n.div_ceil(2)..n {
                for k in 1..n {
                    t3.absorb(super::super::check_theorem3(&DiscreteGrid::new(n, m, k).unwrap(), &opts));
                }
            }
        }
        assert_eq!(d.theorem3.summary, t3.summary);
        assert_eq!(d.theorem3.separate, t3.separate);
    }
}
