//! Reference tables: exact deviation probabilities next to the
//! general-discrete and Hoeffding bounds, and the continuous correction
//! factor over a grid of `(n, eps)`.

use serde::Serialize;

use crate::bounds::{correction_factor, general_discrete_bound, hoeffding_bound};
use crate::error::Result;
use crate::exact_binomial::{tail_probability, Boundary, RationalProb, Side};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationRow {
    pub k: u64,
    /// `k / n`.
    pub eps: RationalProb,
    /// Exact two-sided deviation probability at `eps`.
    pub probability: RationalProb,
    pub general_discrete: f64,
    pub hoeffding: f64,
}

/// One row per `k`: `P(|X/n - m/n| > k/n)` (or `>=` for `Boundary::Weak`)
/// with both bounds evaluated at `eps = k/n`.
pub fn deviation_table(
    n: u64,
    m: u64,
    ks: impl IntoIterator<Item = u64>,
    boundary: Boundary,
) -> Result<Vec<DeviationRow>> {
    let p = RationalProb::new(m, n)?;
    ks.into_iter()
        .map(|k| {
            let eps = RationalProb::new(k, n)?;
            let probability = tail_probability(n, &p, &eps, Side::Two, boundary)?;
            let e = eps.to_f64();
            Ok(DeviationRow {
                k,
                eps,
                probability,
                general_discrete: general_discrete_bound(n, e).value,
                hoeffding: hoeffding_bound(n, e).value,
            })
        })
        .collect()
}

pub const REFERENCE_N: u64 = 33;
pub const REFERENCE_M: u64 = 15;

/// The `n = 33`, `m = 15` reference rows `k = 2..=15`. Probabilities use the
/// weak boundary `|X̄ - p| >= eps`, which is what the published figures
/// correspond to.
pub fn reference_deviation_table() -> Vec<DeviationRow> {
    deviation_table(REFERENCE_N, REFERENCE_M, 2..=15, Boundary::Weak).expect("fixed valid parameters")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrectionCell {
    pub n: u64,
    pub eps: f64,
    /// `exp(eps φ(n, eps))`.
    pub factor: f64,
}

pub const CORRECTION_NS: [u64; 3] = [100, 1_000, 100_000];
pub const CORRECTION_EPS: [f64; 6] = [0.02, 0.05, 0.1, 0.2, 0.3, 0.35];

/// Correction factors over `CORRECTION_NS × CORRECTION_EPS`, row-major.
pub fn correction_factor_table() -> Vec<CorrectionCell> {
    CORRECTION_NS
        .iter()
        .flat_map(|&n| {
            CORRECTION_EPS.iter().map(move |&eps| CorrectionCell {
                n,
                eps,
                factor: correction_factor(n, eps).expect("n eps > 1 on the grid"),
            })
        })
        .collect()
}
