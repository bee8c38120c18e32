//! Lattice parameterisations of `(n, p, eps)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{domain, Result};

use super::rational::RationalProb;

/// The classical setting `p = r/(r+s)`, `n = k(r+s)`, `eps = 1/(r+s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BernoulliGrid {
    pub k: u64,
    pub r: u64,
    pub s: u64,
}

impl BernoulliGrid {
    pub fn new(k: u64, r: u64, s: u64) -> Result<Self> {
        if k == 0 || r == 0 || s == 0 {
            return Err(domain(format!(
                "Bernoulli grid needs k, r, s >= 1 (got k={k}, r={r}, s={s})"
            )));
        }
        Ok(Self { k, r, s })
    }

    pub fn n(&self) -> u64 {
        self.k * (self.r + self.s)
    }

    /// Index of the central lattice point, `m = k r`.
    pub fn m(&self) -> u64 {
        self.k * self.r
    }

    pub fn p(&self) -> RationalProb {
        RationalProb::new(self.r, self.r + self.s).expect("r <= r + s")
    }

    pub fn eps(&self) -> RationalProb {
        RationalProb::new(1u64, self.r + self.s).expect("r + s >= 2")
    }

    /// `eps^2 n = k / (r + s)`.
    pub fn eps2_n(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.r + self.s))
    }

    /// Relabelling `X -> 1 - X` swaps the roles of `r` and `s`.
    pub fn mirrored(&self) -> Self {
        Self {
            k: self.k,
            r: self.s,
            s: self.r,
        }
    }

    /// The same lattice seen as a general discrete grid `(n, m = kr, k)`.
    pub fn as_discrete(&self) -> DiscreteGrid {
        DiscreteGrid {
            n: self.n(),
            m: self.m(),
            k: self.k,
        }
    }
}

impl fmt::Display for BernoulliGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bernoulli(k={},r={},s={})", self.k, self.r, self.s)
    }
}

/// The general discrete setting `p = m/n`, `eps = k/n` with `k, m < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiscreteGrid {
    pub n: u64,
    pub m: u64,
    pub k: u64,
}

impl DiscreteGrid {
    pub fn new(n: u64, m: u64, k: u64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(domain(format!("discrete grid needs 0 < m < n (got m={m}, n={n})")));
        }
        if k == 0 || k >= n {
            return Err(domain(format!("discrete grid needs 0 < k < n (got k={k}, n={n})")));
        }
        Ok(Self { n, m, k })
    }

    pub fn p(&self) -> RationalProb {
        RationalProb::new(self.m, self.n).expect("m < n")
    }

    pub fn eps(&self) -> RationalProb {
        RationalProb::new(self.k, self.n).expect("k < n")
    }

    /// `eps^2 n = k^2 / n`.
    pub fn eps2_n(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k * self.k), BigInt::from(self.n))
    }

    pub fn mirrored(&self) -> Self {
        Self {
            n: self.n,
            m: self.n - self.m,
            k: self.k,
        }
    }

    /// Number of full-size groups on each side: `(floor(m/k), floor((n-m)/k))`.
    pub fn full_group_counts(&self) -> (u64, u64) {
        (self.m / self.k, (self.n - self.m) / self.k)
    }
}

impl fmt::Display for DiscreteGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "discrete(n={},m={},k={})", self.n, self.m, self.k)
    }
}

/// Either lattice parameterisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    Bernoulli(BernoulliGrid),
    Discrete(DiscreteGrid),
}

impl Grid {
    pub fn n(&self) -> u64 {
        match self {
            Grid::Bernoulli(g) => g.n(),
            Grid::Discrete(g) => g.n,
        }
    }

    pub fn m(&self) -> u64 {
        match self {
            Grid::Bernoulli(g) => g.m(),
            Grid::Discrete(g) => g.m,
        }
    }

    /// Group width: `k` in both settings.
    pub fn k(&self) -> u64 {
        match self {
            Grid::Bernoulli(g) => g.k,
            Grid::Discrete(g) => g.k,
        }
    }

    pub fn p(&self) -> RationalProb {
        match self {
            Grid::Bernoulli(g) => g.p(),
            Grid::Discrete(g) => g.p(),
        }
    }

    pub fn eps(&self) -> RationalProb {
        match self {
            Grid::Bernoulli(g) => g.eps(),
            Grid::Discrete(g) => g.eps(),
        }
    }

    pub fn eps2_n(&self) -> BigRational {
        match self {
            Grid::Bernoulli(g) => g.eps2_n(),
            Grid::Discrete(g) => g.eps2_n(),
        }
    }

    pub fn mirrored(&self) -> Self {
        match self {
            Grid::Bernoulli(g) => Grid::Bernoulli(g.mirrored()),
            Grid::Discrete(g) => Grid::Discrete(g.mirrored()),
        }
    }

    /// `p >= 1/2`, i.e. `2m >= n`.
    pub fn p_at_least_half(&self) -> bool {
        2 * self.m() >= self.n()
    }
}

impl From<BernoulliGrid> for Grid {
    fn from(g: BernoulliGrid) -> Self {
        Grid::Bernoulli(g)
    }
}

impl From<DiscreteGrid> for Grid {
    fn from(g: DiscreteGrid) -> Self {
        Grid::Discrete(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Bernoulli(g) => g.fmt(f),
            Grid::Discrete(g) => g.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let g = BernoulliGrid::new(2, 3, 2).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.m(), 6);
        assert_eq!(g.p().to_string(), "3/5");
        assert_eq!(g.eps().to_string(), "1/5");
        assert_eq!(g.eps2_n(), BigRational::new(2.into(), 5.into()));
        assert_eq!(g.as_discrete(), DiscreteGrid::new(10, 6, 2).unwrap());
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(BernoulliGrid::new(0, 1, 1).is_err());
        assert!(BernoulliGrid::new(1, 0, 1).is_err());
        assert!(DiscreteGrid::new(10, 10, 1).is_err());
        assert!(DiscreteGrid::new(10, 0, 1).is_err());
        assert!(DiscreteGrid::new(10, 5, 10).is_err());
    }

    #[test]
    fn mirroring_is_an_involution() {
        let g = DiscreteGrid::new(33, 15, 2).unwrap();
        assert_eq!(g.mirrored().m, 18);
        assert_eq!(g.mirrored().mirrored(), g);
    }
}
