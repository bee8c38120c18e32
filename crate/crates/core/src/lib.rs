//! Exponential tail bounds for the sample mean of Bernoulli variables.
//!
//! * [`exact_binomial`]: exact deviation probabilities and group decompositions.
//! * [`bounds`]: closed-form bound families, the continuous correction factor
//!   and the crossover against Hoeffding's bound.
//! * [`verify`]: exact-arithmetic certification of the bound inequalities.
//! * [`samplesize`]: inverting the bounds for planning.
//! * [`tables`]: reference tables of exact probabilities and correction factors.

// Range guards are written `!(x > a)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod exact_binomial;
pub mod samplesize;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use exact_binomial::{
    BernoulliGrid, Boundary, DiscreteGrid, Grid, GroupDecomposition, LogProb, RationalProb, Side,
};
