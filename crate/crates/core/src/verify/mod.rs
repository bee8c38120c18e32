//! Certification harness. Exact rational quantities are compared against
//! rigorous enclosures of the transcendental thresholds, so a `Pass` never
//! depends on floating point. Non-passing checks carry the enclosure width.

mod checks;
mod enclosure;
mod lemma;
mod limits;
mod report;
mod sweep;

use serde::Serialize;

pub use checks::{
    bernoulli_factor, check_corollaries, check_median, check_one_sided, check_table1_corollaries, check_theorem1,
    check_theorem2, check_theorem3, check_theorem4, discrete_factor, discrete_left_factor, discrete_tail_bound,
};
pub use enclosure::Enclosure;
pub use lemma::{check_lemma1, check_log1p_lower_grid, Curvature, Probe};
pub use limits::{check_normalized_limit, check_proposition1, NormalizedRow, Proposition1Row};
pub use report::{
    to_json, write_csv, CheckKind, RatioCheck, Relation, Suite, Summary, Verdict, VerificationReport, CSV_HEADER,
};
pub use sweep::{
    sweep_bernoulli, sweep_discrete, sweep_lemma1, sweep_median, sweep_one_sided, BernoulliSweep, DiscreteSweep,
    SweepSummary,
};

pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Bits of relative precision for the `exp` enclosures.
    pub precision_bits: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}
