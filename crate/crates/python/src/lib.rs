//! Python bindings. Rationals cross the boundary as `"a/b"` strings; floats
//! passed where a rational is expected are read through their `repr`, so
//! `0.1` means exactly `1/10`.

use std::str::FromStr;

use bernbound::bounds::{self, BoundFamily, BoundQuery};
use bernbound::exact_binomial::rational::ratio_to_f64;
use bernbound::exact_binomial::{
    group_decomposition, parse_ratio, Backend, BernoulliGrid, Boundary, DiscreteGrid, Grid, RationalProb, Side,
    TailValue,
};
use bernbound::samplesize::{self, PlanOptions, PlanQuery};
use bernbound::verify::{self, Suite, VerifyOptions, DEFAULT_PRECISION_BITS};
use bernbound::{tables, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(bernbound, RegimeError, PyValueError, "Parameters lie outside the regime where a result holds.");

fn to_py(err: Error) -> PyErr {
    match err {
        Error::OutOfRegime { .. } | Error::OneSidedRegime { .. } => RegimeError::new_err(err.to_string()),
        Error::Parse { .. } | Error::Domain(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn ratio_text(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    match obj.extract::<String>() {
        Ok(s) => Ok(s),
        Err(_) => Ok(obj.repr()?.extract::<String>()?),
    }
}

fn prob(obj: &Bound<'_, PyAny>) -> PyResult<RationalProb> {
    let text = ratio_text(obj)?;
    parse_ratio(&text).and_then(RationalProb::from_ratio).map_err(to_py)
}

fn real(obj: &Bound<'_, PyAny>) -> PyResult<f64> {
    let r = parse_ratio(&ratio_text(obj)?).map_err(to_py)?;
    Ok(ratio_to_f64(&r))
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    verify::to_json(value).map_err(to_py)
}

/// An evaluated tail bound.
#[pyclass(frozen, module = "bernbound")]
pub struct BoundValue {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    beta: f64,
    #[pyo3(get)]
    value: f64,
    /// Whether (n, eps) meets the family's stated preconditions.
    #[pyo3(get)]
    certified: bool,
}

#[pymethods]
impl BoundValue {
    fn __repr__(&self) -> String {
        format!(
            "BoundValue(family={:?}, value={}, alpha={}, beta={}, certified={})",
            self.family,
            self.value,
            self.alpha,
            self.beta,
            if self.certified { "True" } else { "False" }
        )
    }
}

impl From<bounds::BoundValue> for BoundValue {
    fn from(v: bounds::BoundValue) -> Self {
        Self {
            family: v.family.name().to_string(),
            alpha: v.alpha,
            beta: v.beta,
            value: v.value,
            certified: v.regime.is_certified(),
        }
    }
}

/// Exact or log-domain deviation probability.
#[pyclass(frozen, module = "bernbound")]
pub struct TailResult {
    /// `"a/b"` when computed exactly, else `None`.
    #[pyo3(get)]
    exact: Option<String>,
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    log_value: f64,
    #[pyo3(get)]
    backend: String,
}

#[pymethods]
impl TailResult {
    fn __repr__(&self) -> String {
        format!("TailResult(value={}, backend={:?})", self.value, self.backend)
    }

    fn __float__(&self) -> f64 {
        self.value
    }
}

/// Result of checking one grid.
#[pyclass(frozen, module = "bernbound")]
pub struct Report {
    inner: verify::VerificationReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn suite(&self) -> &'static str {
        self.inner.suite.name()
    }

    #[getter]
    fn config(&self) -> &str {
        &self.inner.config
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(pass, fail, inconclusive)` over counted checks.
    #[getter]
    fn counts(&self) -> (u64, u64, u64) {
        let s = &self.inner.summary;
        (s.pass, s.fail, s.inconclusive)
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        let (p, f, i) = self.counts();
        format!("Report({} {}: pass={p} fail={f} inconclusive={i})", self.suite(), self.inner.config)
    }
}

/// Aggregate of a verification sweep.
#[pyclass(frozen, module = "bernbound")]
pub struct SweepSummary {
    inner: verify::SweepSummary,
}

#[pymethods]
impl SweepSummary {
    #[getter]
    fn suite(&self) -> &'static str {
        self.inner.suite.name()
    }

    #[getter]
    fn configs(&self) -> u64 {
        self.inner.configs
    }

    #[getter]
    fn counts(&self) -> (u64, u64, u64) {
        let s = &self.inner.summary;
        (s.pass, s.fail, s.inconclusive)
    }

    #[getter]
    fn min_margin(&self) -> Option<f64> {
        self.inner.min_margin
    }

    #[getter]
    fn min_margin_config(&self) -> Option<String> {
        self.inner.min_margin_config.clone()
    }

    fn all_pass(&self) -> bool {
        self.inner.all_pass()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        let (p, f, i) = self.counts();
        format!("SweepSummary({}: configs={} pass={p} fail={f} inconclusive={i})", self.suite(), self.configs())
    }
}

/// A lattice of success probability, deviation and sample size.
#[pyclass(frozen, module = "bernbound", name = "Grid")]
pub struct PyGrid {
    inner: Grid,
}

#[pymethods]
impl PyGrid {
    /// `n = k(r+s)`, `p = r/(r+s)`, `eps = 1/(r+s)`.
    #[staticmethod]
    fn bernoulli(k: u64, r: u64, s: u64) -> PyResult<Self> {
        Ok(Self {
            inner: BernoulliGrid::new(k, r, s).map_err(to_py)?.into(),
        })
    }

    /// `p = m/n`, `eps = k/n`.
    #[staticmethod]
    fn discrete(n: u64, m: u64, k: u64) -> PyResult<Self> {
        Ok(Self {
            inner: DiscreteGrid::new(n, m, k).map_err(to_py)?.into(),
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k()
    }

    #[getter]
    fn p(&self) -> String {
        self.inner.p().to_string()
    }

    #[getter]
    fn eps(&self) -> String {
        self.inner.eps().to_string()
    }

    /// `(p0, left, right)` as exact `"a/b"` strings, groups ordered outward.
    fn decompose(&self) -> (String, Vec<String>, Vec<String>) {
        let d = group_decomposition(&self.inner);
        let strs = |v: &[RationalProb]| v.iter().map(|q| q.to_string()).collect();
        (d.p0.to_string(), strs(&d.left), strs(&d.right))
    }

    /// Runs one suite on this grid: theorem1..theorem4, corollaries or median.
    #[pyo3(signature = (suite, precision_bits = DEFAULT_PRECISION_BITS))]
    fn verify(&self, suite: &str, precision_bits: u32) -> PyResult<Report> {
        let opts = VerifyOptions { precision_bits };
        let suite = Suite::from_str(suite).map_err(to_py)?;
        let bernoulli = || match self.inner {
            Grid::Bernoulli(g) => Ok(g),
            Grid::Discrete(_) => Err(PyValueError::new_err(format!("suite {suite} needs a Bernoulli grid"))),
        };
        let discrete = match self.inner {
            Grid::Bernoulli(g) => g.as_discrete(),
            Grid::Discrete(g) => g,
        };
        let inner = match suite {
            Suite::Theorem1 => verify::check_theorem1(&bernoulli()?, &opts),
            Suite::Theorem2 => verify::check_theorem2(&bernoulli()?, &opts),
            Suite::Theorem3 => verify::check_theorem3(&discrete, &opts),
            Suite::Theorem4 => verify::check_theorem4(&discrete, &opts),
            Suite::Corollaries => verify::check_corollaries(&self.inner, &opts).map_err(to_py)?,
            Suite::Median => verify::check_median(&self.inner, &opts),
            other => return Err(PyValueError::new_err(format!("suite {other} is not checked per grid"))),
        };
        Ok(Report { inner })
    }

    fn __repr__(&self) -> String {
        format!("Grid(n={}, m={}, k={})", self.n(), self.m(), self.k())
    }
}

/// Answer to a planning query.
#[pyclass(frozen, module = "bernbound")]
pub struct PlanResult {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    n: u64,
    #[pyo3(get)]
    eps: f64,
    #[pyo3(get)]
    target: f64,
    #[pyo3(get)]
    achieved_bound: f64,
    #[pyo3(get)]
    certified: bool,
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    note: Option<String>,
}

#[pymethods]
impl PlanResult {
    fn __repr__(&self) -> String {
        format!(
            "PlanResult(family={:?}, n={}, eps={}, achieved_bound={})",
            self.family, self.n, self.eps, self.achieved_bound
        )
    }
}

impl From<samplesize::PlanResult> for PlanResult {
    fn from(r: samplesize::PlanResult) -> Self {
        let method = serde_json::to_value(r.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        Self {
            family: r.family.name().to_string(),
            n: r.n,
            eps: r.eps,
            target: r.target,
            achieved_bound: r.achieved_bound,
            certified: r.certified,
            method,
            note: r.note,
        }
    }
}

fn family(name: &str) -> PyResult<BoundFamily> {
    BoundFamily::from_str(name).map_err(to_py)
}

fn plan_options(p: Option<&Bound<'_, PyAny>>) -> PyResult<PlanOptions> {
    Ok(PlanOptions {
        p: p.map(real).transpose()?,
        force_bisection: false,
    })
}

/// Evaluates a bound family at `(n, eps)`; `p` is needed by some families.
#[pyfunction]
#[pyo3(signature = (family_name, n, eps, p = None))]
fn bound(family_name: &str, n: u64, eps: &Bound<'_, PyAny>, p: Option<&Bound<'_, PyAny>>) -> PyResult<BoundValue> {
    let q = BoundQuery {
        n,
        eps: real(eps)?,
        p: p.map(real).transpose()?,
    };
    bounds::evaluate(family(family_name)?, &q).map(BoundValue::from).map_err(to_py)
}

/// `P(|X/n - p| > eps)` (or `>=` with `boundary="weak"`), exact up to
/// `exact_threshold` trials.
#[pyfunction]
#[pyo3(signature = (n, p, eps, side = "two", boundary = "strict", exact_threshold = 500))]
fn tail_probability(
    n: u64,
    p: &Bound<'_, PyAny>,
    eps: &Bound<'_, PyAny>,
    side: &str,
    boundary: &str,
    exact_threshold: u64,
) -> PyResult<TailResult> {
    let side = Side::from_str(side).map_err(to_py)?;
    let boundary = Boundary::from_str(boundary).map_err(to_py)?;
    let backend = Backend { exact_threshold };
    let value = backend.tail(n, &prob(p)?, &prob(eps)?, side, boundary).map_err(to_py)?;
    Ok(match value {
        TailValue::Exact(q) => TailResult {
            exact: Some(q.to_string()),
            value: q.to_f64(),
            log_value: q.ln(),
            backend: "exact".into(),
        },
        TailValue::Log(l) => TailResult {
            exact: None,
            value: l.exp(),
            log_value: l.log_value(),
            backend: "log".into(),
        },
    })
}

/// Smallest `n` with bound at most `target`.
#[pyfunction]
#[pyo3(signature = (eps, target, family_name = "general-discrete", p = None))]
fn min_n(eps: &Bound<'_, PyAny>, target: f64, family_name: &str, p: Option<&Bound<'_, PyAny>>) -> PyResult<PlanResult> {
    samplesize::min_n(real(eps)?, target, family(family_name)?, &plan_options(p)?)
        .map(PlanResult::from)
        .map_err(to_py)
}

/// Smallest `eps` with bound at most `target` for fixed `n`.
#[pyfunction]
#[pyo3(signature = (n, target, family_name = "general-discrete", p = None))]
fn min_eps(n: u64, target: f64, family_name: &str, p: Option<&Bound<'_, PyAny>>) -> PyResult<PlanResult> {
    samplesize::min_eps(n, target, family(family_name)?, &plan_options(p)?)
        .map(PlanResult::from)
        .map_err(to_py)
}

/// Every plannable family answering the query, best first. Give `eps` to
/// solve for `n`, `n` to solve for `eps`, or both to compare bound values.
#[pyfunction]
#[pyo3(signature = (target, eps = None, n = None, p = None))]
fn rank_families(
    target: f64,
    eps: Option<&Bound<'_, PyAny>>,
    n: Option<u64>,
    p: Option<&Bound<'_, PyAny>>,
) -> PyResult<Vec<PlanResult>> {
    let query = match (n, eps.map(real).transpose()?) {
        (None, Some(eps)) => PlanQuery::MinN { eps },
        (Some(n), None) => PlanQuery::MinEps { n },
        (Some(n), Some(eps)) => PlanQuery::Fixed { n, eps },
        (None, None) => return Err(PyValueError::new_err("give eps, n or both")),
    };
    let results = samplesize::best_family(query, target, &plan_options(p)?).map_err(to_py)?;
    Ok(results.into_iter().map(PlanResult::from).collect())
}

/// Deviation `mu(n)` where the general-discrete and Hoeffding bounds cross.
#[pyfunction]
fn crossover_epsilon(n: u64) -> f64 {
    bounds::crossover_epsilon(n).mu
}

/// `(eps, probability, general_discrete, hoeffding)` rows for n = 33, m = 15.
#[pyfunction]
fn table1() -> Vec<(String, f64, f64, f64)> {
    tables::reference_deviation_table()
        .into_iter()
        .map(|r| (r.eps.to_string(), r.probability.to_f64(), r.general_discrete, r.hoeffding))
        .collect()
}

/// `(n, eps, factor)` continuous correction cells.
#[pyfunction]
fn table2() -> Vec<(u64, f64, f64)> {
    tables::correction_factor_table()
        .into_iter()
        .map(|c| (c.n, c.eps, c.factor))
        .collect()
}

/// Sweeps one suite over the default parameter ranges, releasing the GIL.
#[pyfunction]
#[pyo3(signature = (suite, kmax = 6, rsmax = 12, nmax = 40, precision_bits = DEFAULT_PRECISION_BITS))]
fn sweep(py: Python<'_>, suite: &str, kmax: u64, rsmax: u64, nmax: u64, precision_bits: u32) -> PyResult<SweepSummary> {
    let suite = Suite::from_str(suite).map_err(to_py)?;
    let opts = VerifyOptions { precision_bits };
    let inner = py.detach(|| match suite {
        Suite::Theorem1 => Ok(verify::sweep_bernoulli(kmax, rsmax, &opts).theorem1),
        Suite::Theorem2 => Ok(verify::sweep_bernoulli(kmax, rsmax, &opts).theorem2),
        Suite::Theorem3 => Ok(verify::sweep_discrete(nmax, &opts).theorem3),
        Suite::Theorem4 => Ok(verify::sweep_discrete(nmax, &opts).theorem4),
        Suite::Corollaries => {
            let b = verify::sweep_bernoulli(kmax, rsmax, &opts).corollaries;
            Ok(b.merge(verify::sweep_discrete(nmax, &opts).corollaries))
        }
        Suite::OneSided => Ok(verify::sweep_one_sided(kmax, rsmax, &opts)),
        Suite::Median => Ok(verify::sweep_median(kmax, rsmax, &opts)),
        Suite::Lemma1 => {
            let delta_max = parse_ratio("100").expect("literal");
            verify::sweep_lemma1(nmax, &delta_max, 1000, &opts)
        }
        other => Err(Error::Unsupported(format!("suite {other} has no sweep"))),
    });
    Ok(SweepSummary {
        inner: inner.map_err(to_py)?,
    })
}

#[pymodule(name = "bernbound")]
fn bernbound_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RegimeError", m.py().get_type::<RegimeError>())?;
    m.add_class::<BoundValue>()?;
    m.add_class::<TailResult>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<Report>()?;
    m.add_class::<SweepSummary>()?;
    m.add_class::<PlanResult>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(tail_probability, m)?)?;
    m.add_function(wrap_pyfunction!(min_n, m)?)?;
    m.add_function(wrap_pyfunction!(min_eps, m)?)?;
    m.add_function(wrap_pyfunction!(rank_families, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(table2, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
