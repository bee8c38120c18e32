use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_binomial::rational::{format_sci, ln_ratio};
use crate::exact_binomial::Grid;

use super::enclosure::Enclosure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How the exact left-hand side must compare with the enclosed value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtLeast,
    Below,
    AtMost,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::AtMost => "<=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Corollaries,
    OneSided,
    Median,
    Lemma1,
    Proposition1,
    Normalized,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Theorem4,
        Suite::Corollaries,
        Suite::OneSided,
        Suite::Median,
        Suite::Lemma1,
        Suite::Proposition1,
        Suite::Normalized,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Corollaries => "corollaries",
            Suite::OneSided => "one-sided",
            Suite::Median => "median",
            Suite::Lemma1 => "lemma1",
            Suite::Proposition1 => "proposition1",
            Suite::Normalized => "normalized",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.into(),
                reason: "unknown verification suite".into(),
            })
    }
}

/// What a single check compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `Z_j / Z_{j+1}` against the decay factor.
    RightRatio,
    /// `S_j / S_{j+1}` against the decay factor.
    LeftRatio,
    /// `P_1 / P_2` against `b - 1`, i.e. `(b-1) P_2 <= P_1`.
    Consequence,
    /// Exact strict two-sided tail against the exponential bound.
    TailBound,
    /// Exact weak two-sided tail against the exponential bound.
    WeakTailBound,
    UpperTail,
    LowerTail,
    /// `P(X̄ > p)` against one half.
    MedianStrict,
    /// `P(X̄ >= p)` against one half.
    MedianWeak,
    /// Central mass against `p^m (1+p)^(n-m)`.
    CentralMass,
    /// Sum of a probe function against its convexity or concavity bound.
    Lemma,
    /// `1 + delta` against `exp(2 delta / (2 + delta))`.
    Log1pLower,
}

fn ratio_as_sci<S: Serializer>(r: &BigRational, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_sci(r.numer(), r.denom(), 15))
}

/// One certified comparison `lhs <relation> required`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCheck {
    pub kind: CheckKind,
    pub j: u64,
    /// Exact left-hand side, not necessarily in lowest terms.
    #[serde(serialize_with = "ratio_as_sci")]
    pub lhs: BigRational,
    pub relation: Relation,
    /// Midpoint of the enclosure of the right-hand side.
    pub required: f64,
    pub width: f64,
    pub verdict: Verdict,
    /// Log-domain slack; positive when the relation holds.
    pub margin: f64,
}

impl RatioCheck {
    /// Builds a check from `numer / denom` without reducing the fraction.
    pub fn new(kind: CheckKind, j: u64, numer: &BigInt, denom: &BigInt, relation: Relation, rhs: &Enclosure) -> Self {
        let verdict = rhs.verdict(numer, denom, relation);
        let required = rhs.midpoint_f64();
        let ln_lhs = ln_ratio(numer, denom);
        let margin = match relation {
            Relation::AtLeast => ln_lhs - required.ln(),
            Relation::Below | Relation::AtMost => required.ln() - ln_lhs,
        };
        Self {
            kind,
            j,
            lhs: BigRational::new_raw(numer.clone(), denom.clone()),
            relation,
            required,
            width: rhs.width_f64(),
            verdict,
            margin,
        }
    }

    pub fn lhs_f64(&self) -> f64 {
        ln_ratio(self.lhs.numer(), self.lhs.denom()).exp()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: u64,
    pub fail: u64,
    pub inconclusive: u64,
}

impl Summary {
    pub fn of(checks: &[RatioCheck]) -> Self {
        let mut s = Self::default();
        for c in checks {
            s.record(c.verdict);
        }
        s
    }

    pub fn record(&mut self, verdict: Verdict) {
        match verdict {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn add(&mut self, other: &Summary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.inconclusive += other.inconclusive;
    }

    pub fn total(&self) -> u64 {
        self.pass + self.fail + self.inconclusive
    }

    pub fn all_pass(&self) -> bool {
        self.fail == 0 && self.inconclusive == 0
    }
}

/// Result of checking one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    /// Set when a `p < 1/2` configuration was reflected before checking.
    pub mirrored: bool,
    pub precision_bits: u32,
    pub checks: Vec<RatioCheck>,
    /// Checks that involve a short terminal group or a non-binding form;
    /// reported but not counted in `summary`.
    pub separate: Vec<RatioCheck>,
    pub notes: Vec<String>,
    pub summary: Summary,
}

impl VerificationReport {
    pub(crate) fn new(suite: Suite, config: String, grid: Option<Grid>, precision_bits: u32) -> Self {
        Self {
            suite,
            config,
            grid,
            mirrored: false,
            precision_bits,
            checks: Vec::new(),
            separate: Vec::new(),
            notes: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        self.summary = Summary::of(&self.checks);
        self
    }

    /// The tail-against-bound comparison, when the suite has one.
    pub fn tail_vs_bound(&self) -> Option<&RatioCheck> {
        self.checks.iter().find(|c| c.kind == CheckKind::TailBound)
    }

    pub fn passed(&self) -> bool {
        self.summary.all_pass()
    }

    pub(crate) fn sort_key(&self) -> (Option<Grid>, &str) {
        (self.grid, &self.config)
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "suite", "config", "kind", "j", "lhs", "relation", "required", "width", "verdict", "margin", "counted",
];

/// One CSV row per check, counted checks first within each report.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        let rows = r.checks.iter().map(|c| (c, true)).chain(r.separate.iter().map(|c| (c, false)));
        for (c, counted) in rows {
            w.write_record([
                r.suite.name().to_string(),
                r.config.clone(),
                serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                c.j.to_string(),
                format_sci(c.lhs.numer(), c.lhs.denom(), 15),
                c.relation.to_string(),
                format!("{:e}", c.required),
                format!("{:e}", c.width),
                c.verdict.to_string(),
                format!("{:e}", c.margin),
                counted.to_string(),
            ])
            .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))?;
    Ok(())
}

/// JSON with object keys in sorted order.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Output(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Output(e.to_string()))
}
