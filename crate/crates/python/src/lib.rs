//! Python module `ewens_ldp`.

use ewens_ldp_core::concentration::{self, BoundReport};
use ewens_ldp_core::harness::{self, McEstimate};
use ewens_ldp_core::ldp::{self, RateEvalConfig};
use ewens_ldp_core::mgf::{self as core_mgf, MgfConfig, MgfMethod, MgfResult};
use ewens_ldp_core::mittag;
use ewens_ldp_core::partition;
use ewens_ldp_core::quadrature::QuadratureConfig;
use ewens_ldp_core::series::SeriesConfig;
use ewens_ldp_core::Error;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if e.is_domain() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ewens_ldp_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Parameters `(alpha, theta)` of the two-parameter model.
#[pyclass(name = "ModelParams", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyModelParams {
    inner: ewens_ldp_core::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (alpha, theta = 0.0))]
    fn new(alpha: f64, theta: f64) -> PyResult<Self> {
        Ok(PyModelParams {
            inner: ewens_ldp_core::ModelParams::new(alpha, theta).py()?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta()
    }

    /// `theta / alpha`, or `None` when `alpha = 0`.
    #[getter]
    fn theta_alpha(&self) -> Option<f64> {
        self.inner.theta_alpha()
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(alpha={}, theta={})", self.inner.alpha(), self.inner.theta())
    }
}

/// A value of `m_n(t)`.
#[pyclass(name = "MgfResult", frozen, get_all, skip_from_py_object)]
struct PyMgfResult {
    value: f64,
    log_value: f64,
    method: String,
    terms_used: usize,
    remainder: Option<f64>,
}

impl From<MgfResult> for PyMgfResult {
    fn from(r: MgfResult) -> Self {
        PyMgfResult {
            value: r.value,
            log_value: r.log_value,
            method: r.method.name().to_string(),
            terms_used: r.terms_used,
            remainder: r.remainder,
        }
    }
}

#[pymethods]
impl PyMgfResult {
    fn __repr__(&self) -> String {
        format!("MgfResult(value={}, log_value={}, method='{}')", self.value, self.log_value, self.method)
    }
}

/// Monte Carlo estimate of `P(K_n >= n x)` with a 95% Wilson interval.
#[pyclass(name = "McEstimate", frozen, get_all, skip_from_py_object)]
struct PyMcEstimate {
    p_hat: f64,
    hits: u64,
    reps: u64,
    ci_lower_95: f64,
    ci_upper_95: f64,
    seed: u64,
}

impl From<McEstimate> for PyMcEstimate {
    fn from(m: McEstimate) -> Self {
        PyMcEstimate {
            p_hat: m.p_hat,
            hits: m.hits,
            reps: m.reps,
            ci_lower_95: m.ci_lower_95,
            ci_upper_95: m.ci_upper_95,
            seed: m.seed,
        }
    }
}

#[pymethods]
impl PyMcEstimate {
    fn __repr__(&self) -> String {
        format!(
            "McEstimate(p_hat={}, hits={}, reps={}, ci=({}, {}))",
            self.p_hat, self.hits, self.reps, self.ci_lower_95, self.ci_upper_95
        )
    }
}

fn py_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "None".to_string(), |x| x.to_string())
}

/// Bounds on `P(K_n >= n x)` at one level.
#[pyclass(name = "BoundReport", frozen, get_all, skip_from_py_object)]
struct PyBoundReport {
    x: f64,
    n: usize,
    paper_bound: f64,
    exact_tail: Option<f64>,
    exact_chernoff: Option<f64>,
}

impl From<BoundReport> for PyBoundReport {
    fn from(b: BoundReport) -> Self {
        PyBoundReport {
            x: b.x,
            n: b.n,
            paper_bound: b.paper_bound,
            exact_tail: b.exact_tail,
            exact_chernoff: b.exact_chernoff,
        }
    }
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "BoundReport(x={}, n={}, paper_bound={}, exact_tail={}, exact_chernoff={})",
            self.x,
            self.n,
            self.paper_bound,
            py_opt(self.exact_tail),
            py_opt(self.exact_chernoff)
        )
    }
}

/// `P(K_n = k)` for `k = 1..n`.
#[pyfunction]
fn kn_distribution(params: &PyModelParams, n: usize) -> PyResult<Vec<f64>> {
    Ok(partition::kn_distribution(&params.inner, n).py()?.probs().to_vec())
}

/// `ln` of the probability of a partition given by its multiplicities.
#[pyfunction]
fn eppf_log_prob(params: &PyModelParams, counts: Vec<u32>) -> PyResult<f64> {
    let c = partition::PartitionCounts::new(counts).py()?;
    Ok(partition::eppf_log_prob(&params.inner, &c))
}

/// One draw of `K_n`.
#[pyfunction]
fn sample_kn(params: &PyModelParams, n: usize, seed: u64) -> PyResult<u64> {
    Ok(partition::crp_sample(&params.inner, n, seed).py()?.k_n)
}

/// `E[exp(t K_n)]` by the chosen method.
#[pyfunction]
#[pyo3(signature = (params, n, t, method = "series"))]
fn mgf(params: &PyModelParams, n: usize, t: f64, method: &str) -> PyResult<PyMgfResult> {
    let m: MgfMethod = method.parse().py()?;
    Ok(core_mgf::mgf(&params.inner, n, t, m, &MgfConfig::default()).py()?.into())
}

/// Closed-form `(lower, upper)` bracket on `m_n(t)` for `theta = 0`.
#[pyfunction]
fn mgf_sandwich(alpha: f64, n: usize, t: f64) -> PyResult<(f64, f64)> {
    let b = core_mgf::mgf_sandwich_theta0(alpha, n, t).py()?;
    Ok((b.lower, b.upper))
}

/// `-ln(1 - (1 - e^{-t})^{1/alpha})`.
#[pyfunction]
fn limit_log_mgf(alpha: f64, t: f64) -> f64 {
    ldp::limit_log_mgf(alpha, t)
}

/// `(t_x, I_alpha(x))`.
#[pyfunction]
fn rate_alpha(alpha: f64, x: f64) -> PyResult<(f64, f64)> {
    let r = ldp::rate_alpha(alpha, x, &RateEvalConfig::default()).py()?;
    Ok((r.t_x, r.rate))
}

#[pyfunction]
fn rate_ewens(theta: f64, x: f64) -> PyResult<f64> {
    ldp::rate_ewens(theta, x).py()
}

#[pyfunction]
fn paper_bound(params: &PyModelParams, n: usize, x: f64) -> PyResult<f64> {
    concentration::paper_bound(&params.inner, n, x).py()
}

#[pyfunction]
fn exact_tail(params: &PyModelParams, n: usize, x: f64) -> PyResult<f64> {
    concentration::exact_tail(&params.inner, n, x).py()
}

#[pyfunction]
fn exact_chernoff(params: &PyModelParams, n: usize, x: f64) -> PyResult<f64> {
    concentration::exact_chernoff(&params.inner, n, x, &SeriesConfig::default()).py()
}

#[pyfunction]
#[pyo3(signature = (params, n, xs, with_chernoff = true))]
fn bound_reports(params: &PyModelParams, n: usize, xs: Vec<f64>, with_chernoff: bool) -> PyResult<Vec<PyBoundReport>> {
    let rows = concentration::bound_reports(&params.inner, n, &xs, with_chernoff, &SeriesConfig::default()).py()?;
    Ok(rows.into_iter().map(Into::into).collect())
}

/// Monte Carlo tail estimate; releases the GIL while sampling.
#[pyfunction]
fn mc_tail(py: Python<'_>, params: &PyModelParams, n: usize, x: f64, reps: u64, seed: u64) -> PyResult<PyMcEstimate> {
    let p = params.inner;
    Ok(py.detach(|| harness::mc_tail(&p, n, x, reps, seed)).py()?.into())
}

#[pyfunction]
fn wilson_interval(hits: u64, reps: u64) -> (f64, f64) {
    harness::wilson_interval(hits, reps)
}

/// `E_alpha(z)`, by power series or by the integral form.
#[pyfunction]
#[pyo3(signature = (alpha, z, method = "series"))]
fn mittag_leffler(alpha: f64, z: f64, method: &str) -> PyResult<f64> {
    match method {
        "series" => mittag::ml_series(alpha, z, &SeriesConfig::default()).py(),
        "integral" => mittag::ml_integral(alpha, z, &QuadratureConfig::default()).py(),
        other => Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    }
}

/// Three-parameter `E^gamma_{alpha,beta}(z)`.
#[pyfunction]
fn mittag_leffler3(alpha: f64, beta: f64, gamma: f64, z: f64) -> PyResult<f64> {
    mittag::ml3_series(alpha, beta, gamma, z, &SeriesConfig::default()).py()
}

#[pymodule]
fn ewens_ldp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PyMgfResult>()?;
    m.add_class::<PyMcEstimate>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(kn_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(eppf_log_prob, m)?)?;
    m.add_function(wrap_pyfunction!(sample_kn, m)?)?;
    m.add_function(wrap_pyfunction!(mgf, m)?)?;
    m.add_function(wrap_pyfunction!(mgf_sandwich, m)?)?;
    m.add_function(wrap_pyfunction!(limit_log_mgf, m)?)?;
    m.add_function(wrap_pyfunction!(rate_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(rate_ewens, m)?)?;
    m.add_function(wrap_pyfunction!(paper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(exact_tail, m)?)?;
    m.add_function(wrap_pyfunction!(exact_chernoff, m)?)?;
    m.add_function(wrap_pyfunction!(bound_reports, m)?)?;
    m.add_function(wrap_pyfunction!(mc_tail, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler3, m)?)?;
    Ok(())
}
