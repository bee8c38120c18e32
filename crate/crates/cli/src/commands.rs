use std::str::FromStr;

use bernbound::bounds::{central_mass_base, crossover_epsilon, evaluate, BoundFamily, BoundQuery};
use bernbound::exact_binomial::rational::ratio_to_f64;
use bernbound::exact_binomial::{
    group_decomposition, parse_ratio, Backend, BernoulliGrid, Boundary, DiscreteGrid, Grid, RationalProb, Side,
    TailValue,
};
use bernbound::samplesize::{best_family, min_eps, min_n, PlanOptions, PlanQuery, PlanResult};
use bernbound::tables::{correction_factor_table, deviation_table, CORRECTION_EPS, REFERENCE_M, REFERENCE_N};
use bernbound::verify::{
    check_normalized_limit, check_proposition1, check_table1_corollaries, sweep_bernoulli, sweep_discrete,
    sweep_lemma1, sweep_median, sweep_one_sided, Suite, SweepSummary, VerifyOptions,
};
use bernbound::Error;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::args::{
    BoundArgs, DecomposeArgs, FigureArgs, Panel, SampleSizeArgs, TableArgs, TailArgs, VerifyArgs,
};
use crate::output::{fixed, Metadata, OutputRecord};

/// Process exit status beyond success.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    Inconclusive,
}

pub type Outcome = Result<(OutputRecord, Status), Error>;

fn metadata(precision_bits: u32, boundary: Boundary) -> Metadata {
    Metadata {
        precision_bits,
        boundary: boundary.to_string(),
        backend_threshold: Backend::default().exact_threshold,
    }
}

fn prob(s: &str) -> Result<RationalProb, Error> {
    RationalProb::from_ratio(parse_ratio(s)?)
}

fn real(s: &str) -> Result<f64, Error> {
    Ok(ratio_to_f64(&parse_ratio(s)?))
}

pub fn bound(a: &BoundArgs, bits: u32) -> Outcome {
    let family = BoundFamily::from_str(&a.family)?;
    let eps = real(&a.eps)?;
    let p = a.p.as_deref().map(real).transpose()?;
    let v = evaluate(family, &BoundQuery { n: a.n, eps, p })?;
    let mut rec = OutputRecord::new(
        "bound",
        a,
        metadata(bits, Boundary::Strict),
        &["family", "n", "eps", "p", "value", "alpha", "beta", "certified"],
    );
    rec.push(vec![
        json!(family.name()),
        json!(a.n),
        json!(a.eps),
        json!(a.p),
        fixed(v.value, a.digits),
        fixed(v.alpha, a.digits),
        fixed(v.beta, a.digits),
        json!(v.regime.is_certified()),
    ]);
    Ok((rec, Status::Ok))
}

pub fn tail(a: &TailArgs, bits: u32) -> Outcome {
    let side = Side::from_str(&a.side)?;
    let boundary = Boundary::from_str(&a.boundary)?;
    let p = prob(&a.p)?;
    let eps = prob(&a.eps)?;
    let backend = Backend {
        exact_threshold: a.exact_threshold,
    };
    let value = backend.tail(a.n, &p, &eps, side, boundary)?;
    let (exact, ln, name) = match &value {
        TailValue::Exact(q) => (json!(q.to_string()), q.ln(), "exact"),
        TailValue::Log(l) => (Value::Null, l.log_value(), "log"),
    };
    let mut meta = metadata(bits, boundary);
    meta.backend_threshold = a.exact_threshold;
    let mut rec = OutputRecord::new(
        "tail",
        a,
        meta,
        &["n", "p", "eps", "side", "boundary", "probability", "decimal", "log_probability", "backend"],
    );
    rec.push(vec![
        json!(a.n),
        json!(p.to_string()),
        json!(eps.to_string()),
        json!(side.to_string()),
        json!(boundary.to_string()),
        exact,
        fixed(value.to_f64(), a.digits),
        fixed(ln, a.digits),
        json!(name),
    ]);
    Ok((rec, Status::Ok))
}

pub fn decompose(a: &DecomposeArgs, bits: u32) -> Outcome {
    let grid: Grid = match (a.r, a.s, a.n, a.m) {
        (Some(r), Some(s), None, None) => BernoulliGrid::new(a.k, r, s)?.into(),
        (None, None, Some(n), Some(m)) => DiscreteGrid::new(n, m, a.k)?.into(),
        _ => {
            return Err(Error::Parse {
                input: "decompose".into(),
                reason: "give either --r and --s or --n and --m".into(),
            })
        }
    };
    let d = group_decomposition(&grid);
    let mut rec = OutputRecord::new(
        "decompose",
        a,
        metadata(bits, Boundary::Strict),
        &["group", "side", "index", "probability", "decimal", "short"],
    );
    let mut push = |group: String, side: &str, index: usize, q: &RationalProb, short: bool| {
        rec.push(vec![
            json!(group),
            json!(side),
            json!(index),
            json!(q.to_string()),
            fixed(q.to_f64(), a.digits),
            json!(short),
        ]);
    };
    push("p0".into(), "centre", 0, &d.p0, false);
    let count = d.left.len().max(d.right.len());
    for j in 0..count {
        if let Some(q) = d.left.get(j) {
            let short = d.left_short.is_some() && j + 1 == d.left.len();
            push(format!("S{}", j + 1), "left", j + 1, q, short);
        }
        if let Some(q) = d.right.get(j) {
            let short = d.right_short.is_some() && j + 1 == d.right.len();
            push(format!("Z{}", j + 1), "right", j + 1, q, short);
        }
    }
    rec.details = Some(json!({
        "n": grid.n(),
        "m": grid.m(),
        "k": grid.k(),
        "total": d.total().to_string(),
    }));
    Ok((rec, Status::Ok))
}

pub fn table1(a: &TableArgs, bits: u32) -> Outcome {
    let boundary = Boundary::Weak;
    let rows = deviation_table(REFERENCE_N, REFERENCE_M, 2..=15, boundary)?;
    let mut columns = vec!["eps", "probability", "general_discrete", "hoeffding"];
    if a.exact {
        columns.extend(["k", "eps_exact", "probability_exact"]);
    }
    let mut rec = OutputRecord::new("table1", a, metadata(bits, boundary), &columns);
    for r in rows {
        let mut values = vec![
            fixed(r.eps.to_f64(), 4),
            fixed(r.probability.to_f64(), 6),
            fixed(r.general_discrete, 6),
            fixed(r.hoeffding, 6),
        ];
        if a.exact {
            values.extend([json!(r.k), json!(r.eps.to_string()), json!(r.probability.to_string())]);
        }
        rec.push(values);
    }
    rec.details = Some(json!({"n": REFERENCE_N, "m": REFERENCE_M}));
    Ok((rec, Status::Ok))
}

pub fn table2(a: &TableArgs, bits: u32) -> Outcome {
    let labels: Vec<String> = CORRECTION_EPS.iter().map(|e| e.to_string()).collect();
    let mut columns = vec!["n"];
    columns.extend(labels.iter().map(String::as_str));
    let mut rec = OutputRecord::new("table2", a, metadata(bits, Boundary::Strict), &columns);
    for row in correction_factor_table().chunks(CORRECTION_EPS.len()) {
        let mut values = vec![json!(row[0].n)];
        values.extend(row.iter().map(|c| fixed(c.factor, 4)));
        rec.push(values);
    }
    Ok((rec, Status::Ok))
}

pub fn figure_data(a: &FigureArgs, bits: u32) -> Outcome {
    let points = a.points.max(2);
    let steps = (points - 1) as f64;
    let meta = metadata(bits, Boundary::Strict);
    let rec = match a.panel {
        Panel::A => {
            let mut rec = OutputRecord::new("figure-data", a, meta, &["p", "f"]);
            for i in 0..points {
                let p = i as f64 / steps;
                rec.push(vec![json!(p), json!(central_mass_base(p))]);
            }
            rec
        }
        Panel::B | Panel::D => {
            let n = a.n.unwrap_or(if a.panel == Panel::B { 20 } else { 100 });
            let eps_max = real(&a.eps_max)?;
            let mut rec = OutputRecord::new(
                "figure-data",
                a,
                meta,
                &["eps", "general_discrete", "hoeffding", "general_discrete_smaller"],
            );
            for i in 1..=points {
                let eps = eps_max * i as f64 / points as f64;
                let g = bernbound::bounds::general_discrete_bound(n, eps).value;
                let h = bernbound::bounds::hoeffding_bound(n, eps).value;
                rec.push(vec![json!(eps), json!(g), json!(h), json!(g < h)]);
            }
            rec.details = Some(json!({"n": n, "crossover": crossover_epsilon(n).mu}));
            rec
        }
        Panel::C => {
            let mut rec = OutputRecord::new("figure-data", a, meta, &["n", "mu", "scaled_mu"]);
            let top = (a.n.unwrap_or(1_000_000) as f64).ln();
            let mut last = 0;
            for i in 0..points {
                let n = (top * i as f64 / steps).exp().round() as u64;
                if n == last {
                    continue;
                }
                last = n;
                let mu = crossover_epsilon(n).mu;
                rec.push(vec![json!(n), json!(mu), json!((n as f64).powf(0.25) * mu)]);
            }
            rec.details = Some(json!({"scaled_mu_limit": (std::f64::consts::LN_2 / 2.0).powf(0.25)}));
            rec
        }
    };
    Ok((rec, Status::Ok))
}

const SUMMARY_COLUMNS: [&str; 10] = [
    "suite",
    "configs",
    "pass",
    "fail",
    "inconclusive",
    "separate_pass",
    "separate_fail",
    "separate_inconclusive",
    "min_margin",
    "min_margin_config",
];

fn summary_row(s: &SweepSummary) -> Vec<Value> {
    vec![
        json!(s.suite.name()),
        json!(s.configs),
        json!(s.summary.pass),
        json!(s.summary.fail),
        json!(s.summary.inconclusive),
        json!(s.separate.pass),
        json!(s.separate.fail),
        json!(s.separate.inconclusive),
        json!(s.min_margin),
        json!(s.min_margin_config),
    ]
}

fn parse_suites(list: &[String]) -> Result<Vec<Suite>, Error> {
    if list.iter().any(|s| s == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut suites = list.iter().map(|s| Suite::from_str(s)).collect::<Result<Vec<_>, _>>()?;
    suites.sort_by_key(|s| Suite::ALL.iter().position(|x| x == s));
    suites.dedup();
    Ok(suites)
}

pub fn verify(a: &VerifyArgs, bits: u32) -> Outcome {
    let suites = parse_suites(&a.suite)?;
    let opts = VerifyOptions { precision_bits: bits };
    let mut sweeps: Vec<SweepSummary> = Vec::new();
    let mut details = serde_json::Map::new();
    let mut extra_rows: Vec<(String, Value)> = Vec::new();

    let needs_bernoulli = suites
        .iter()
        .any(|s| matches!(s, Suite::Theorem1 | Suite::Theorem2) || (*s == Suite::Corollaries && !a.table1));
    let needs_discrete = suites
        .iter()
        .any(|s| matches!(s, Suite::Theorem3 | Suite::Theorem4) || (*s == Suite::Corollaries && !a.table1));
    let bern = needs_bernoulli.then(|| sweep_bernoulli(a.kmax, a.rsmax, &opts));
    let disc = needs_discrete.then(|| sweep_discrete(a.nmax, &opts));

    for suite in &suites {
        match suite {
            Suite::Theorem1 => sweeps.push(bern.as_ref().expect("computed").theorem1.clone()),
            Suite::Theorem2 => sweeps.push(bern.as_ref().expect("computed").theorem2.clone()),
            Suite::Theorem3 => sweeps.push(disc.as_ref().expect("computed").theorem3.clone()),
            Suite::Theorem4 => sweeps.push(disc.as_ref().expect("computed").theorem4.clone()),
            Suite::Corollaries if a.table1 => {
                let mut s = SweepSummary::new(Suite::Corollaries);
                let reports = check_table1_corollaries(&opts);
                details.insert("table1".into(), serde_json::to_value(&reports).expect("reports serialize"));
                for r in reports {
                    s.absorb(r);
                }
                sweeps.push(s);
            }
            Suite::Corollaries => {
                let b = bern.as_ref().expect("computed").corollaries.clone();
                sweeps.push(b.merge(disc.as_ref().expect("computed").corollaries.clone()));
            }
            Suite::OneSided => sweeps.push(sweep_one_sided(a.kmax, a.rsmax, &opts)),
            Suite::Median => sweeps.push(sweep_median(a.kmax, a.rsmax, &opts)),
            Suite::Lemma1 => {
                let delta_max: BigRational = parse_ratio(&a.delta_max)?;
                sweeps.push(sweep_lemma1(a.lemma_nmax, &delta_max, a.delta_steps, &opts)?);
            }
            Suite::Proposition1 => {
                let rows = check_proposition1(&a.n_list, &prob(&a.p)?)?;
                for r in &rows {
                    extra_rows.push((suite.name().into(), json!({
                        "n": r.n,
                        "deviation": r.deviation_f64,
                        "eps2_n": r.eps2_n,
                        "inner_empty": r.inner_empty,
                    })));
                }
                details.insert(suite.name().into(), serde_json::to_value(&rows).expect("rows serialize"));
            }
            Suite::Normalized => {
                let rows = check_normalized_limit(real(&a.p)?, a.t, &a.n_list)?;
                for r in &rows {
                    extra_rows.push((suite.name().into(), json!({
                        "n": r.n,
                        "general": r.general,
                        "limit": r.limit,
                    })));
                }
                details.insert(suite.name().into(), serde_json::to_value(&rows).expect("rows serialize"));
            }
        }
    }

    let mut columns = SUMMARY_COLUMNS.to_vec();
    if !extra_rows.is_empty() {
        columns.push("values");
    }
    let mut rec = OutputRecord::new("verify", a, metadata(bits, Boundary::Strict), &columns);
    let width = columns.len();
    for s in &sweeps {
        let mut row = summary_row(s);
        row.resize(width, Value::Null);
        rec.push(row);
    }
    for (suite, values) in extra_rows {
        let mut row = vec![Value::Null; width];
        row[0] = json!(suite);
        row[width - 1] = values;
        rec.push(row);
    }
    let flagged: Vec<_> = sweeps.iter().flat_map(|s| &s.flagged).collect();
    details.insert("flagged".into(), serde_json::to_value(&flagged).expect("reports serialize"));
    rec.details = Some(Value::Object(details));

    let fail: u64 = sweeps.iter().map(|s| s.summary.fail).sum();
    let inconclusive: u64 = sweeps.iter().map(|s| s.summary.inconclusive).sum();
    let status = if fail > 0 {
        Status::Failed
    } else if a.strict && inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    Ok((rec, status))
}

const PLAN_COLUMNS: [&str; 9] = [
    "family",
    "unknown",
    "n",
    "eps",
    "target",
    "achieved_bound",
    "certified",
    "method",
    "note",
];

fn plan_row(r: &PlanResult) -> Vec<Value> {
    let v = serde_json::to_value(r).expect("plans serialize");
    PLAN_COLUMNS.iter().map(|c| v[c].clone()).collect()
}

pub fn samplesize(a: &SampleSizeArgs, bits: u32) -> Outcome {
    let opts = PlanOptions {
        p: a.p.as_deref().map(real).transpose()?,
        force_bisection: a.force_bisection,
    };
    let eps = a.eps.as_deref().map(real).transpose()?;
    let query = match (a.n, eps) {
        (None, Some(eps)) => PlanQuery::MinN { eps },
        (Some(n), None) => PlanQuery::MinEps { n },
        (Some(n), Some(eps)) => PlanQuery::Fixed { n, eps },
        (None, None) => {
            return Err(Error::Parse {
                input: "samplesize".into(),
                reason: "give --eps, --n or both".into(),
            })
        }
    };
    let results = if a.rank {
        best_family(query, a.target, &opts)?
    } else {
        let family = BoundFamily::from_str(a.family.as_deref().unwrap_or("general-discrete"))?;
        let plan = match query {
            PlanQuery::MinN { eps } => min_n(eps, a.target, family, &opts)?,
            PlanQuery::MinEps { n } => min_eps(n, a.target, family, &opts)?,
            PlanQuery::Fixed { n, eps } => {
                let v = evaluate(family, &BoundQuery { n, eps, p: opts.p })?;
                PlanResult {
                    family,
                    unknown: bernbound::samplesize::Unknown::Neither,
                    n,
                    eps,
                    target: a.target,
                    achieved_bound: v.value,
                    certified: v.regime.is_certified(),
                    method: bernbound::samplesize::Method::Direct,
                    note: (v.value > a.target).then(|| "bound exceeds target".to_string()),
                }
            }
        };
        vec![plan]
    };
    let mut rec = OutputRecord::new("samplesize", a, metadata(bits, Boundary::Strict), &PLAN_COLUMNS);
    for r in &results {
        rec.push(plan_row(r));
    }
    Ok((rec, Status::Ok))
}
