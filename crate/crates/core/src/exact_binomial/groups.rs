//! Partition of the binomial masses into the centre point and equal-width
//! groups walking outward to the left (`S_j`) and right (`Z_j`).
//!
//! With centre `m` and width `k`, left group `j` covers indices
//! `m - kj ..= m - 1 - (j-1)k` and right group `j` covers
//! `m + 1 + (j-1)k ..= m + kj`. On a Bernoulli grid every group is full;
//! on a discrete grid the outermost group on each side may be short.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{domain, Result};

use super::grid::Grid;
use super::pmf::{binomial_coefficient, BinomialWeights};
use super::rational::RationalProb;

/// Group masses as integers over the common denominator of the grid's
/// binomial weights.
#[derive(Clone, Debug)]
pub struct GroupMasses {
    pub denom: BigInt,
    pub p0: BigInt,
    pub left: Vec<BigInt>,
    pub right: Vec<BigInt>,
    /// Leading full-width groups; any group after these is the short one.
    pub left_full: usize,
    pub right_full: usize,
    /// Width of the short terminal group, if there is one.
    pub left_short: Option<u64>,
    pub right_short: Option<u64>,
}

impl GroupMasses {
    pub fn from_weights(w: &BinomialWeights, m: u64, k: u64) -> Self {
        assert!(k >= 1, "group width must be positive");
        let (n, m, k) = (w.n() as i64, m as i64, k as i64);
        let mut left = Vec::new();
        let mut left_full = 0;
        let mut left_short = None;
        let mut j = 1;
        loop {
            let hi = m - 1 - (j - 1) * k;
            if hi < 0 {
                break;
            }
            let lo = m - k * j;
            if lo >= 0 {
                left_full += 1;
            } else {
                left_short = Some((hi + 1) as u64);
            }
            left.push(w.range_sum(lo, hi));
            j += 1;
        }
        let mut right = Vec::new();
        let mut right_full = 0;
        let mut right_short = None;
        let mut j = 1;
        loop {
            let lo = m + 1 + (j - 1) * k;
            if lo > n {
                break;
            }
            let hi = m + k * j;
            if hi <= n {
                right_full += 1;
            } else {
                right_short = Some((n - lo + 1) as u64);
            }
            right.push(w.range_sum(lo, hi));
            j += 1;
        }
        Self {
            denom: w.denom().clone(),
            p0: w.weight(m as u64),
            left,
            right,
            left_full,
            right_full,
            left_short,
            right_short,
        }
    }

    pub fn for_grid(grid: &Grid) -> Self {
        let w = BinomialWeights::new(grid.n(), &grid.p());
        Self::from_weights(&w, grid.m(), grid.k())
    }

    fn prob(&self, x: &BigInt) -> RationalProb {
        RationalProb::from_parts_unchecked(x.clone(), self.denom.clone())
    }

    /// Mass of the groups past the first on both sides: the strict
    /// two-sided deviation at `eps = k/n`.
    pub fn outer_mass(&self) -> BigInt {
        let tail = |v: &[BigInt]| v.iter().skip(1).fold(BigInt::zero(), |acc, x| acc + x);
        tail(&self.left) + tail(&self.right)
    }
}

/// `P⁰` plus the ordered left and right groups, as exact probabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupDecomposition {
    pub grid: Grid,
    pub p0: RationalProb,
    pub left: Vec<RationalProb>,
    pub right: Vec<RationalProb>,
    pub group_size_left: u64,
    pub group_size_right: u64,
    pub left_short: Option<u64>,
    pub right_short: Option<u64>,
}

impl GroupDecomposition {
    /// `P⁰ + ΣS_j + ΣZ_j`; equal to one for every grid.
    pub fn total(&self) -> RationalProb {
        let sum = self
            .left
            .iter()
            .chain(&self.right)
            .fold(self.p0.as_ratio().clone(), |acc, x| acc + x.as_ratio());
        RationalProb::from_ratio(sum).expect("group masses sum to at most one")
    }

    /// `Σ_{j>=2} S_j + Σ_{j>=2} Z_j`.
    pub fn outer_mass(&self) -> RationalProb {
        let sum = self
            .left
            .iter()
            .skip(1)
            .chain(self.right.iter().skip(1))
            .fold(BigRational::zero(), |acc, x| acc + x.as_ratio());
        RationalProb::from_ratio(sum).expect("subset of a probability")
    }
}

pub fn group_decomposition(grid: &Grid) -> GroupDecomposition {
    let masses = GroupMasses::for_grid(grid);
    GroupDecomposition {
        grid: *grid,
        p0: masses.prob(&masses.p0),
        left: masses.left.iter().map(|x| masses.prob(x)).collect(),
        right: masses.right.iter().map(|x| masses.prob(x)).collect(),
        group_size_left: grid.k(),
        group_size_right: grid.k(),
        left_short: masses.left_short,
        right_short: masses.right_short,
    }
}

/// `(r, s)`: the number of full-width groups on each side.
fn group_counts(grid: &Grid) -> (u64, u64) {
    match grid {
        Grid::Bernoulli(g) => (g.r, g.s),
        Grid::Discrete(g) => g.full_group_counts(),
    }
}

/// `A(j) = C(n, m-j) / C(n, m-k-j)` for `1 <= j <= k(r-1)`.
pub fn coefficient_a(grid: &Grid, j: u64) -> Result<BigRational> {
    let (r, _) = group_counts(grid);
    let k = grid.k();
    if r < 2 || j == 0 || j > k * (r - 1) {
        return Err(domain(format!(
            "A(j) is defined for 1 <= j <= k(r-1) with r >= 2 (got j={j}, k={k}, r={r})"
        )));
    }
    let (n, m) = (grid.n(), grid.m());
    Ok(BigRational::new(
        binomial_coefficient(n, m - j),
        binomial_coefficient(n, m - k - j),
    ))
}

/// `B(j) = C(n, m+j) / C(n, m+k+j)` for `1 <= j <= k(s-1)`.
pub fn coefficient_b(grid: &Grid, j: u64) -> Result<BigRational> {
    let (_, s) = group_counts(grid);
    let k = grid.k();
    if s < 2 || j == 0 || j > k * (s - 1) {
        return Err(domain(format!(
            "B(j) is defined for 1 <= j <= k(s-1) with s >= 2 (got j={j}, k={k}, s={s})"
        )));
    }
    let (n, m) = (grid.n(), grid.m());
    Ok(BigRational::new(
        binomial_coefficient(n, m + j),
        binomial_coefficient(n, m + k + j),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_binomial::grid::{BernoulliGrid, DiscreteGrid};

    fn prob(s: &str) -> RationalProb {
        RationalProb::parse(s).unwrap()
    }

    #[test]
    fn two_trial_fair_coin() {
        let g: Grid = BernoulliGrid::new(1, 1, 1).unwrap().into();
        let d = group_decomposition(&g);
        assert_eq!(d.p0, prob("1/2"));
        assert_eq!(d.left, vec![prob("1/4")]);
        assert_eq!(d.right, vec![prob("1/4")]);
        assert_eq!(d.total(), RationalProb::one());
        assert!(d.outer_mass().is_zero());
    }

    #[test]
    fn bernoulli_grid_group_counts() {
        let g: Grid = BernoulliGrid::new(2, 3, 2).unwrap().into();
        let d = group_decomposition(&g);
        assert_eq!(d.left.len(), 3);
        assert_eq!(d.right.len(), 2);
        assert_eq!(d.left_short, None);
        assert_eq!(d.right_short, None);
        assert_eq!(d.total(), RationalProb::one());
    }

    #[test]
    fn discrete_grid_short_groups() {
        // m=15, k=2: 7 full left groups plus a single-index group {0};
        // n-m=18 on the right: 9 full groups.
        let g: Grid = DiscreteGrid::new(33, 15, 2).unwrap().into();
        let d = group_decomposition(&g);
        assert_eq!(d.left.len(), 8);
        assert_eq!(d.left_short, Some(1));
        assert_eq!(d.right.len(), 9);
        assert_eq!(d.right_short, None);
        assert_eq!(d.total(), RationalProb::one());
    }

    #[test]
    fn coefficients_small_grid() {
        let g: Grid = BernoulliGrid::new(1, 2, 2).unwrap().into();
        assert_eq!(coefficient_b(&g, 1).unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(coefficient_a(&g, 1).unwrap(), BigRational::from_integer(4.into()));
        assert!(coefficient_a(&g, 2).is_err());
        assert!(coefficient_b(&g, 0).is_err());
        let narrow: Grid = BernoulliGrid::new(3, 1, 4).unwrap().into();
        assert!(coefficient_a(&narrow, 1).is_err());
    }

    #[test]
    fn coefficients_match_product_form() {
        let g: Grid = BernoulliGrid::new(3, 4, 3).unwrap().into();
        let (n, m, k) = (g.n() as i64, g.m() as i64, g.k() as i64);
        for j in 1..=k * 2 {
            let prod = (1..=k).fold(BigRational::from_integer(1.into()), |acc, v| {
                acc * BigRational::new((m + j + v).into(), (n - m - k - j + v).into())
            });
            assert_eq!(coefficient_b(&g, j as u64).unwrap(), prod);
        }
        for j in 1..=k * 3 {
            let prod = (1..=k).fold(BigRational::from_integer(1.into()), |acc, v| {
                acc * BigRational::new((n - m + j + v).into(), (m - k - j + v).into())
            });
            assert_eq!(coefficient_a(&g, j as u64).unwrap(), prod);
        }
    }
}
