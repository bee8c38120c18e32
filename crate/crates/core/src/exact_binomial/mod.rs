//! Exact and log-domain binomial probabilities, group decompositions around
//! the centre lattice point, and lattice rounding for real-valued `(p, eps)`.
//!
//! The exact path keeps every probability as a big rational and is the only
//! one used for certification. The log-domain path exists for large `n`.

mod grid;
mod groups;
mod partition;
mod pmf;
pub mod rational;
mod tail;

pub use grid::{BernoulliGrid, DiscreteGrid, Grid};
pub use groups::{coefficient_a, coefficient_b, group_decomposition, GroupDecomposition, GroupMasses};
pub use partition::{continuous_partition, ContinuousPartition};
pub use pmf::{binomial_coefficient, binomial_pmf, log_binomial_pmf, BinomialWeights, LogProb};
pub use rational::{parse_ratio, RationalProb};
pub use tail::{
    log_sum_exp, log_tail_probability, tail_indices, tail_probability, Backend, Boundary, Side,
    TailIndices, TailValue,
};
